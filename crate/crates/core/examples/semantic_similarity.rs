//! Averaged word vectors and their cosine, the meaning feature.
//!
//! ```sh
//! cargo run --example semantic_similarity
//! ```

use crosscheck::corpus::{clean_text, Stopwords};
use crosscheck::embedding::{semantic_similarity, WordVectorStore};

fn main() -> crosscheck::Result<()> {
    let store = WordVectorStore::fixture();
    let stopwords = Stopwords::english();
    let reliable = "Marines killed in bombings outside Kabul airport, officials say";
    println!("{} words x {} dims", store.len(), store.dim());
    println!("reliable: {reliable}");
    let r = store.embed(&clean_text(reliable, &stopwords)?.tokens);
    for claim in [
        "Marines killed in Kabul airport attack",
        "No marines were killed, they were just injured",
        "Everyone at the airport is safe and calm",
    ] {
        let c = store.embed(&clean_text(claim, &stopwords)?.tokens);
        println!("{:+.3}  {claim}", semantic_similarity(&c, &r)?);
    }
    Ok(())
}

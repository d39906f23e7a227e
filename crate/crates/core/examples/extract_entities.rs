//! Entity extraction: capitalized runs plus a gazetteer of known phrases.
//!
//! ```sh
//! cargo run --example extract_entities
//! ```

use crosscheck::corpus::{clean_text, Stopwords};
use crosscheck::entities::{EntityExtractor, ExtractEntities};

fn main() -> crosscheck::Result<()> {
    let stopwords = Stopwords::english();
    let with_gazetteer = EntityExtractor::with_default_gazetteer();
    let capitals_only = EntityExtractor::without_gazetteer();

    for text in [
        "Explosions outside Kabul airport, says US Central Command",
        "Hurricane Ida makes landfall in Louisiana as a Category 4 storm",
        "vaccine mandates spread as officials warn of attack risk",
    ] {
        let cased = clean_text(text, &stopwords)?.text_cased;
        println!("{text}");
        println!("  capitalized runs: {:?}", capitals_only.extract(&cased));
        println!("  with gazetteer:   {:?}", with_gazetteer.extract(&cased));
    }
    Ok(())
}

//! Lexicon sentiment and emotion profiles of a claim against a reliable post.
//!
//! ```sh
//! cargo run --example sentiment_emotion
//! ```

use crosscheck::affect::{emotion, sentiment, sentiment_diff, Emotion, EmotionLexicon, SentimentLexicon};
use crosscheck::corpus::{clean_text, Stopwords};

fn main() -> crosscheck::Result<()> {
    let stopwords = Stopwords::english();
    let sentiments = SentimentLexicon::fixture();
    let emotions = EmotionLexicon::fixture();

    let claim = clean_text("The India flood did not have any victims.", &stopwords)?.tokens;
    let reliable = clean_text("At least 15 dead and dozens missing in India floods", &stopwords)?.tokens;
    let (s_claim, s_reliable) = (sentiment(&claim, &sentiments), sentiment(&reliable, &sentiments));
    println!("claim sentiment {s_claim:+.2}, reliable sentiment {s_reliable:+.2}");
    println!("difference {:+.2}", sentiment_diff(s_claim, &[s_reliable])?);

    for text in [
        "Marines killed, families grieve and the nation is in shock",
        "Officials warn of panic and danger after the threat",
        "Stunning record win, fans cheered",
    ] {
        let profile = emotion(&clean_text(text, &stopwords)?.tokens, &emotions);
        let shares: Vec<String> = Emotion::ALL
            .iter()
            .map(|&e| format!("{e:?} {:.2}", profile.get(e)))
            .collect();
        println!("{text}\n    {}", shares.join("  "));
    }
    Ok(())
}

//! Cleans raw posts and selects the ones inside a time window.
//!
//! ```sh
//! cargo run --example clean_and_window
//! ```

use crosscheck::corpus::{clean_text, parse_posts, parse_timestamp, Stopwords, TimeWindow};

fn main() -> crosscheck::Result<()> {
    let stopwords = Stopwords::english();
    let raw = "BREAKING: 13 US service members killed near Kabul airport https://t.co/x1 via @newsdesk";
    let cleaned = clean_text(raw, &stopwords)?;
    println!("raw:     {raw}");
    println!("cased:   {}", cleaned.text_cased);
    println!("tokens:  {:?}", cleaned.tokens);

    let posts = parse_posts(include_str!("../data/kabul_window.jsonl"))?;
    let center = parse_timestamp("2021-08-26T00:00:00Z").expect("valid timestamp");
    for radius in [1, 3] {
        let window = TimeWindow::new(center, radius)?;
        let inside = posts.iter().filter(|p| window.contains(&p.timestamp)).count();
        println!(
            "window {} .. {}: {inside} of {} posts",
            window.start(),
            window.end(),
            posts.len()
        );
    }
    Ok(())
}

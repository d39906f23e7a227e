//! Fits a random forest on a toy two-feature problem and reloads it from JSON.
//!
//! ```sh
//! cargo run --example train_forest
//! ```

use crosscheck::forest::{best_split, gini, Label, RandomForestModel, TrainConfig};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn main() -> crosscheck::Result<()> {
    println!("gini [2,2] = {}, [3,1] = {}", gini([2, 2])?, gini([3, 1])?);

    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let x: Vec<Vec<f64>> = (0..200)
        .map(|_| vec![rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0)])
        .collect();
    // fake inside the circle of radius sqrt(0.5)
    let y: Vec<Label> = x
        .iter()
        .map(|p| {
            if p[0] * p[0] + p[1] * p[1] < 0.5 {
                Label::Fake
            } else {
                Label::Real
            }
        })
        .collect();

    let all: Vec<usize> = (0..x.len()).collect();
    if let Some(root) = best_split(&x, &y, &all, &[0, 1]) {
        println!(
            "root split: feature {} at {:.3}, impurity drop {:.3}",
            root.feature, root.threshold, root.decrease
        );
    }

    let config = TrainConfig {
        n_trees: 50,
        ..TrainConfig::with_seed(7)
    };
    let model = RandomForestModel::fit(&x, &y, &config, "toy/v1")?;
    let correct = x
        .iter()
        .zip(&y)
        .filter(|(p, l)| model.predict_raw(p).is_ok_and(|r| r.label == **l))
        .count();
    println!("training accuracy {:.3}", correct as f64 / x.len() as f64);

    let reloaded = RandomForestModel::from_json(&model.to_json())?;
    for probe in [[0.0, 0.0], [0.9, 0.9], [0.5, -0.4]] {
        let p = reloaded.predict_raw(&probe)?;
        println!("{probe:?} -> {} (fake votes {:.2})", p.label, p.score);
    }
    Ok(())
}

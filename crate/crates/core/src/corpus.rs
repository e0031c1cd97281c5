//! Seeded generators of small random codes for exhaustive experiments.
//!
//! All generators draw from a caller-supplied RNG so corpora are reproducible.

use rand::Rng;

use crate::algebra::Word;
use crate::codes::{balance_closure, Code};

/// Up to `max_words` uniformly random words of length `n` (duplicates merged).
pub fn random_code<R: Rng + ?Sized>(rng: &mut R, q: u32, n: usize, max_words: usize) -> Code {
    let words: Vec<Word> =
        (0..max_words.max(1)).map(|_| Word::from_raw(q, (0..n).map(|_| rng.gen_range(0..q)).collect())).collect();
    Code::new(q, n, words).expect("random words share q and n")
}

/// The balance closure of `seeds` random words, so at most `seeds * q` words.
pub fn random_balanced_code<R: Rng + ?Sized>(rng: &mut R, q: u32, n: usize, seeds: usize) -> Code {
    balance_closure(&random_code(rng, q, n, seeds))
}

/// Random words kept only while they stay at distance at least `min_dist`
/// from every word already accepted. Gives codes with controlled distance.
pub fn random_code_with_distance<R: Rng + ?Sized>(
    rng: &mut R,
    q: u32,
    n: usize,
    max_words: usize,
    min_dist: usize,
    tries: usize,
) -> Code {
    let mut accepted: Vec<Vec<u32>> = Vec::new();
    for _ in 0..tries {
        if accepted.len() >= max_words {
            break;
        }
        let cand: Vec<u32> = (0..n).map(|_| rng.gen_range(0..q)).collect();
        let far = accepted.iter().all(|w| w.iter().zip(&cand).filter(|(a, b)| a != b).count() >= min_dist);
        if far {
            accepted.push(cand);
        }
    }
    if accepted.is_empty() {
        accepted.push(vec![0; n]);
    }
    let words = accepted.into_iter().map(|s| Word::from_raw(q, s)).collect();
    Code::new(q, n, words).expect("random words share q and n")
}

//! Codes over `Z_q`: containers, balancing, quotienting by the all-ones
//! word, linear constructions and exhaustive distance metrics.

mod linear;
mod metrics;

pub use linear::{
    enumerate_codewords, random_linear_code_gv, reed_solomon, reed_solomon_generator, sample_linear_code, GvSample,
    LinearCode, GV_RETRY_BUDGET,
};
pub(crate) use linear::{gv_dimension, required_distance};
pub use metrics::{code_bias, lwise_bias, lwise_distance, min_distance, BiasReport, DistanceReport};

use std::collections::BTreeSet;
use std::fmt::Write as _;

use crate::algebra::Word;
use crate::error::{dim, invalid, Error, Result};

/// A deduplicated set of words of common length over a common alphabet,
/// kept in lexicographic order.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Code {
    q: u32,
    n: usize,
    words: Vec<Word>,
}

impl Code {
    pub fn new(q: u32, n: usize, words: Vec<Word>) -> Result<Self> {
        if words.is_empty() {
            return Err(invalid("a code needs at least one codeword"));
        }
        for w in &words {
            if w.alphabet_size() != q || w.len() != n {
                return Err(dim(format!("codeword {w} is not a length-{n} word over Z_{q}")));
            }
        }
        let mut words = words;
        words.sort_unstable();
        words.dedup();
        Ok(Self { q, n, words })
    }

    /// Convenience constructor from raw symbol rows.
    pub fn from_rows(q: u32, rows: &[Vec<u32>]) -> Result<Self> {
        let n = rows.first().map(Vec::len).ok_or_else(|| invalid("empty code"))?;
        let words = rows.iter().map(|r| Word::new(q, r.clone())).collect::<Result<Vec<_>>>()?;
        Self::new(q, n, words)
    }

    pub(crate) fn from_sorted_unchecked(q: u32, n: usize, words: Vec<Word>) -> Self {
        debug_assert!(words.windows(2).all(|w| w[0] < w[1]));
        Self { q, n, words }
    }

    pub fn alphabet_size(&self) -> u32 {
        self.q
    }

    pub fn block_length(&self) -> usize {
        self.n
    }

    pub fn len(&self) -> usize {
        self.words.len()
    }

    pub fn is_empty(&self) -> bool {
        self.words.is_empty()
    }

    pub fn words(&self) -> &[Word] {
        &self.words
    }

    pub fn contains(&self, w: &Word) -> bool {
        self.words.binary_search(w).is_ok()
    }

    /// Serializes in the text format: a `q n` header, then one codeword per
    /// line as space-separated symbols, in lexicographic order.
    pub fn to_text(&self) -> String {
        let mut out = format!("{} {}\n", self.q, self.n);
        for w in &self.words {
            let line: Vec<String> = w.symbols().iter().map(u32::to_string).collect();
            let _ = writeln!(out, "{}", line.join(" "));
        }
        out
    }

    pub fn from_text(text: &str) -> Result<Self> {
        let mut lines = text.lines().map(str::trim).filter(|l| !l.is_empty());
        let header = lines.next().ok_or_else(|| Error::Parse("empty code file".into()))?;
        let hdr: Vec<&str> = header.split_whitespace().collect();
        if hdr.len() != 2 {
            return Err(Error::Parse(format!("bad header {header:?}, expected \"q n\"")));
        }
        let q: u32 = hdr[0].parse().map_err(|_| Error::Parse(format!("bad q in {header:?}")))?;
        let n: usize = hdr[1].parse().map_err(|_| Error::Parse(format!("bad n in {header:?}")))?;
        let mut words = Vec::new();
        for (lineno, line) in lines.enumerate() {
            let symbols = line
                .split_whitespace()
                .map(|t| t.parse::<u32>())
                .collect::<std::result::Result<Vec<_>, _>>()
                .map_err(|e| Error::Parse(format!("codeword line {}: {e}", lineno + 2)))?;
            if symbols.len() != n {
                return Err(Error::Parse(format!(
                    "codeword line {} has {} symbols, expected {n}",
                    lineno + 2,
                    symbols.len()
                )));
            }
            words.push(Word::new(q, symbols).map_err(|e| Error::Parse(e.to_string()))?);
        }
        Self::new(q, n, words).map_err(|e| Error::Parse(e.to_string()))
    }
}

/// True iff `c + alpha * 1` lies in the code for every codeword and every
/// `alpha` in `Z_q`.
pub fn is_balanced(c: &Code) -> bool {
    c.words.iter().all(|w| (1..c.q).all(|a| c.contains(&w.shift(a))))
}

/// The smallest balanced code containing `c`.
pub fn balance_closure(c: &Code) -> Code {
    let mut set = BTreeSet::new();
    for w in &c.words {
        for a in 0..c.q {
            set.insert(w.shift(a));
        }
    }
    Code::from_sorted_unchecked(c.q, c.n, set.into_iter().collect())
}

/// One representative per class of codewords that differ by a multiple of
/// the all-ones word: the lexicographically smallest member.
pub fn quotient_by_ones(c: &Code) -> Result<Code> {
    if !is_balanced(c) {
        return Err(Error::Precondition("quotient_by_ones needs a balanced code".into()));
    }
    let reps: Vec<Word> = c.words.iter().filter(|w| (1..c.q).all(|a| **w <= w.shift(a))).cloned().collect();
    Ok(Code::from_sorted_unchecked(c.q, c.n, reps))
}

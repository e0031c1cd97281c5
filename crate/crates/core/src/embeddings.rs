//! Spherical and Boolean embeddings of words and codes.
//!
//! `sph_word` sends symbol `s` at position `i` to `zeta^s / sqrt(n)` with
//! `zeta = exp(2 pi i / q)`. `bool_word` replaces each symbol by the standard
//! basis vector of length `q` it indexes.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::algebra::Word;
use crate::codes::Code;
use crate::error::{Error, Result};
use crate::matrix::ComplexMatrix;

pub const INVERSE_TOLERANCE: f64 = 1e-9;

/// `exp(2 pi i s / q)`, exact at the quarter turns so binary and quaternary
/// embeddings stay real or purely imaginary.
pub fn root_of_unity(s: u32, q: u32) -> Complex64 {
    let s = s % q;
    if (4 * s as u64).is_multiple_of(q as u64) {
        return match 4 * s as u64 / q as u64 {
            0 => Complex64::new(1.0, 0.0),
            1 => Complex64::new(0.0, 1.0),
            2 => Complex64::new(-1.0, 0.0),
            _ => Complex64::new(0.0, -1.0),
        };
    }
    let angle = 2.0 * std::f64::consts::PI * s as f64 / q as f64;
    Complex64::new(angle.cos(), angle.sin())
}

pub fn sph_word(c: &Word) -> Vec<Complex64> {
    let q = c.alphabet_size();
    let scale = 1.0 / (c.len() as f64).sqrt();
    c.symbols().iter().map(|&s| root_of_unity(s, q) * scale).collect()
}

pub fn bool_word(c: &Word) -> Vec<u8> {
    let q = c.alphabet_size() as usize;
    let mut out = vec![0u8; q * c.len()];
    for (i, &s) in c.symbols().iter().enumerate() {
        out[i * q + s as usize] = 1;
    }
    out
}

/// Columns are the embedded codewords in the code's lexicographic order.
pub fn sph_code(c: &Code) -> ComplexMatrix {
    let data = c.words().iter().flat_map(sph_word).collect();
    ComplexMatrix::from_columns(c.block_length(), c.len(), data).expect("codes are nonempty")
}

pub fn bool_code(c: &Code, normalize: bool) -> ComplexMatrix {
    let scale = if normalize { 1.0 / (c.block_length() as f64).sqrt() } else { 1.0 };
    let data = c
        .words()
        .iter()
        .flat_map(|w| bool_word(w).into_iter().map(move |b| Complex64::new(b as f64 * scale, 0.0)))
        .collect();
    let rows = c.alphabet_size() as usize * c.block_length();
    ComplexMatrix::from_columns(rows, c.len(), data).expect("codes are nonempty")
}

fn inverse_column(column: &[Complex64], col: usize) -> Result<Word> {
    let n = column.len();
    if n == 0 {
        return Err(Error::Dimension("empty column".into()));
    }
    let unit = 1.0 / (n as f64).sqrt();
    let mut symbols = Vec::with_capacity(n);
    for (row, z) in column.iter().enumerate() {
        if (z - unit).norm() <= INVERSE_TOLERANCE {
            symbols.push(0);
        } else if (z + unit).norm() <= INVERSE_TOLERANCE {
            symbols.push(1);
        } else {
            return Err(Error::NotAnEmbedding { row, col, value: z.re });
        }
    }
    Ok(Word::from_raw(2, symbols))
}

/// Reads a `+-1/sqrt(n)` column back as a binary word (`+` is 0, `-` is 1).
pub fn sph_inverse_binary(column: &[Complex64]) -> Result<Word> {
    inverse_column(column, 0)
}

/// Inverts every column of a spherically embedded binary code. Fails if any
/// entry is off the grid or two columns coincide.
pub fn binary_code_from_sph(m: &ComplexMatrix) -> Result<Code> {
    let words: Vec<Word> = (0..m.cols()).map(|j| inverse_column(m.column(j), j)).collect::<Result<_>>()?;
    let code = Code::new(2, m.rows(), words)?;
    if code.len() != m.cols() {
        return Err(Error::Precondition("matrix has repeated columns".into()));
    }
    Ok(code)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum EmbeddingKind {
    Spherical,
    Boolean,
}

/// What was embedded and how, for provenance files.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EmbeddingRecord {
    pub kind: EmbeddingKind,
    pub normalization: f64,
    pub source_alphabet: u32,
    pub source_block_length: usize,
    pub source_size: usize,
}

impl EmbeddingRecord {
    pub fn new(kind: EmbeddingKind, code: &Code, normalized: bool) -> Self {
        let n = code.block_length() as f64;
        let normalization = match kind {
            EmbeddingKind::Spherical => 1.0 / n.sqrt(),
            EmbeddingKind::Boolean if normalized => 1.0 / n.sqrt(),
            EmbeddingKind::Boolean => 1.0,
        };
        Self {
            kind,
            normalization,
            source_alphabet: code.alphabet_size(),
            source_block_length: code.block_length(),
            source_size: code.len(),
        }
    }
}

//! Dense complex and 0/1 matrices, plus their JSON file format.
//!
//! Complex matrices are stored column-major because every certifier works
//! column by column. The file format is row-major:
//! `{"kind": "complex", "n": .., "N": .., "entries": [[re, im], ...]}` or
//! `{"kind": "binary", "rows": ["0101", ...]}`.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{dim, invalid, Error, Result};

#[derive(Debug, Clone, PartialEq)]
pub struct ComplexMatrix {
    rows: usize,
    cols: usize,
    data: Vec<Complex64>,
}

impl ComplexMatrix {
    /// Builds from column-major entries.
    pub fn from_columns(rows: usize, cols: usize, data: Vec<Complex64>) -> Result<Self> {
        if rows == 0 || cols == 0 {
            return Err(invalid("matrix dimensions must be positive"));
        }
        if data.len() != rows * cols {
            return Err(dim(format!("{} entries for a {rows}x{cols} matrix", data.len())));
        }
        if data.iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
            return Err(invalid("matrix entries must be finite"));
        }
        Ok(Self { rows, cols, data })
    }

    pub fn from_fn(rows: usize, cols: usize, f: impl Fn(usize, usize) -> Complex64) -> Result<Self> {
        let mut data = Vec::with_capacity(rows * cols);
        for j in 0..cols {
            for i in 0..rows {
                data.push(f(i, j));
            }
        }
        Self::from_columns(rows, cols, data)
    }

    pub fn identity(n: usize) -> Result<Self> {
        Self::from_fn(n, n, |i, j| if i == j { Complex64::new(1.0, 0.0) } else { Complex64::new(0.0, 0.0) })
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> Complex64 {
        self.data[j * self.rows + i]
    }

    pub fn column(&self, j: usize) -> &[Complex64] {
        &self.data[j * self.rows..(j + 1) * self.rows]
    }

    /// `<col a, col b>` with conjugation on the second argument.
    pub fn inner(&self, a: usize, b: usize) -> Complex64 {
        inner(self.column(a), self.column(b))
    }

    pub fn column_norm(&self, j: usize) -> f64 {
        self.column(j).iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
    }

    /// True when every imaginary part is exactly zero.
    pub fn is_real(&self) -> bool {
        self.data.iter().all(|z| z.im == 0.0)
    }

    /// Full Gram matrix `G[a][b] = <col a, col b>`, row-major `cols x cols`.
    pub fn gram(&self) -> Vec<Complex64> {
        let n = self.cols;
        let mut g = vec![Complex64::new(0.0, 0.0); n * n];
        for a in 0..n {
            for b in a..n {
                let v = self.inner(a, b);
                g[a * n + b] = v;
                g[b * n + a] = v.conj();
            }
        }
        g
    }

    /// `M x` for a dense vector `x` of length `cols`.
    pub fn mul_vec(&self, x: &[Complex64]) -> Result<Vec<Complex64>> {
        if x.len() != self.cols {
            return Err(dim(format!("vector of length {} for {} columns", x.len(), self.cols)));
        }
        let mut y = vec![Complex64::new(0.0, 0.0); self.rows];
        for (j, &xj) in x.iter().enumerate() {
            if xj == Complex64::new(0.0, 0.0) {
                continue;
            }
            for (yi, &m) in y.iter_mut().zip(self.column(j)) {
                *yi += m * xj;
            }
        }
        Ok(y)
    }

    /// The submatrix on the given columns, in the given order.
    pub fn select_columns(&self, cols: &[usize]) -> Result<ComplexMatrix> {
        let mut data = Vec::with_capacity(cols.len() * self.rows);
        for &j in cols {
            if j >= self.cols {
                return Err(dim(format!("column {j} out of range")));
            }
            data.extend_from_slice(self.column(j));
        }
        Self::from_columns(self.rows, cols.len(), data)
    }

    pub fn to_file(&self) -> MatrixFile {
        let mut entries = Vec::with_capacity(self.rows * self.cols);
        for i in 0..self.rows {
            for j in 0..self.cols {
                let z = self.get(i, j);
                entries.push([z.re, z.im]);
            }
        }
        MatrixFile::Complex { n: self.rows, big_n: self.cols, entries }
    }
}

pub(crate) fn inner(a: &[Complex64], b: &[Complex64]) -> Complex64 {
    a.iter().zip(b).map(|(x, y)| x * y.conj()).sum()
}

/// A 0/1 matrix stored as one bitset per column.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct BinaryMatrix {
    rows: usize,
    cols: usize,
    blocks: usize,
    bits: Vec<u64>,
}

impl BinaryMatrix {
    /// Builds from the supports of each column.
    pub fn from_supports(rows: usize, supports: &[Vec<usize>]) -> Result<Self> {
        if rows == 0 || supports.is_empty() {
            return Err(invalid("matrix dimensions must be positive"));
        }
        let blocks = rows.div_ceil(64);
        let mut bits = vec![0u64; blocks * supports.len()];
        for (j, supp) in supports.iter().enumerate() {
            for &i in supp {
                if i >= rows {
                    return Err(dim(format!("row {i} out of range in column {j}")));
                }
                bits[j * blocks + i / 64] |= 1 << (i % 64);
            }
        }
        Ok(Self { rows, cols: supports.len(), blocks, bits })
    }

    pub fn from_row_strings(rows: &[String]) -> Result<Self> {
        let n = rows.len();
        let cols = rows.first().map(|r| r.len()).ok_or_else(|| Error::Parse("no rows".into()))?;
        let mut supports = vec![Vec::new(); cols];
        for (i, r) in rows.iter().enumerate() {
            if r.len() != cols {
                return Err(Error::Parse(format!("row {i} has length {}, expected {cols}", r.len())));
            }
            for (j, ch) in r.chars().enumerate() {
                match ch {
                    '0' => {}
                    '1' => supports[j].push(i),
                    other => return Err(Error::Parse(format!("unexpected {other:?} in row {i}"))),
                }
            }
        }
        Self::from_supports(n, &supports).map_err(|e| Error::Parse(e.to_string()))
    }

    pub fn identity(n: usize) -> Result<Self> {
        Self::from_supports(n, &(0..n).map(|i| vec![i]).collect::<Vec<_>>())
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> bool {
        self.bits[j * self.blocks + i / 64] >> (i % 64) & 1 == 1
    }

    pub(crate) fn column_bits(&self, j: usize) -> &[u64] {
        &self.bits[j * self.blocks..(j + 1) * self.blocks]
    }

    pub(crate) fn blocks(&self) -> usize {
        self.blocks
    }

    pub fn column_support(&self, j: usize) -> Vec<usize> {
        (0..self.rows).filter(|&i| self.get(i, j)).collect()
    }

    pub fn column_weight(&self, j: usize) -> usize {
        self.column_bits(j).iter().map(|b| b.count_ones() as usize).sum()
    }

    pub fn row_strings(&self) -> Vec<String> {
        (0..self.rows).map(|i| (0..self.cols).map(|j| if self.get(i, j) { '1' } else { '0' }).collect()).collect()
    }

    /// The same matrix with entries `0` and `scale`.
    pub fn to_complex(&self, scale: f64) -> ComplexMatrix {
        ComplexMatrix::from_fn(self.rows, self.cols, |i, j| {
            Complex64::new(if self.get(i, j) { scale } else { 0.0 }, 0.0)
        })
        .expect("dimensions already validated")
    }

    pub fn to_file(&self) -> MatrixFile {
        MatrixFile::Binary { rows: self.row_strings() }
    }
}

/// Serialized form of either matrix kind.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum MatrixFile {
    Complex {
        n: usize,
        #[serde(rename = "N")]
        big_n: usize,
        entries: Vec<[f64; 2]>,
    },
    Binary {
        rows: Vec<String>,
    },
}

impl MatrixFile {
    pub fn from_json(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| Error::Parse(format!("matrix file: {e}")))
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("matrix files always serialize")
    }

    pub fn to_complex(&self) -> Result<ComplexMatrix> {
        match self {
            MatrixFile::Complex { n, big_n, entries } => {
                if entries.len() != n * big_n {
                    return Err(Error::Parse(format!("{} entries for a {n}x{big_n} matrix", entries.len())));
                }
                ComplexMatrix::from_fn(*n, *big_n, |i, j| {
                    let [re, im] = entries[i * big_n + j];
                    Complex64::new(re, im)
                })
            }
            MatrixFile::Binary { .. } => Ok(self.to_binary()?.to_complex(1.0)),
        }
    }

    /// Only binary files convert; complex matrices are rejected even when
    /// their entries happen to be 0/1.
    pub fn to_binary(&self) -> Result<BinaryMatrix> {
        match self {
            MatrixFile::Binary { rows } => BinaryMatrix::from_row_strings(rows),
            MatrixFile::Complex { .. } => Err(invalid("expected a binary matrix file")),
        }
    }
}

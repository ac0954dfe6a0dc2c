//! Companion matrices of the multinacci recurrence and their signed powers,
//! assembled directly from sequence terms, plus generic modular matrix
//! algebra (multiply, determinant, adjugate inverse) used as an
//! independent oracle.

use crate::error::{Error, Result};
use crate::modmath::{mod_inv, reduce};
use crate::multinacci::{self, MultinacciOrder};

/// Above this |k|, `q_power` switches from a single sequence window to
/// square-and-multiply on the companion matrix.
pub const Q_POWER_MATMUL_THRESHOLD: i64 = 1_000_000;

/// Generic rows x cols matrix of canonical residues mod m, row-major.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct ModMatrix {
    rows: usize,
    cols: usize,
    modulus: u64,
    entries: Vec<u64>,
}

impl ModMatrix {
    pub fn new(rows: usize, cols: usize, modulus: u64, entries: Vec<u64>) -> Result<Self> {
        if modulus < 2 {
            return Err(Error::InvalidModulus(modulus));
        }
        if entries.len() != rows * cols {
            return Err(Error::DimensionMismatch(rows, cols, entries.len(), 1));
        }
        let entries = entries.into_iter().map(|e| e % modulus).collect();
        Ok(ModMatrix {
            rows,
            cols,
            modulus,
            entries,
        })
    }

    /// Build from possibly negative integers, canonicalizing mod m.
    pub fn from_signed(rows: usize, cols: usize, modulus: u64, entries: &[i64]) -> Result<Self> {
        Self::new(
            rows,
            cols,
            modulus,
            entries.iter().map(|&e| reduce(e, modulus)).collect(),
        )
    }

    pub fn identity(n: usize, modulus: u64) -> Result<Self> {
        let mut m = Self::new(n, n, modulus, vec![0; n * n])?;
        for i in 0..n {
            m.entries[i * n + i] = 1 % modulus;
        }
        Ok(m)
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn modulus(&self) -> u64 {
        self.modulus
    }

    pub fn get(&self, i: usize, j: usize) -> u64 {
        self.entries[i * self.cols + j]
    }

    pub fn entries(&self) -> &[u64] {
        &self.entries
    }

    pub fn is_identity(&self) -> bool {
        self.rows == self.cols
            && (0..self.rows).all(|i| {
                (0..self.cols).all(|j| self.get(i, j) == if i == j { 1 % self.modulus } else { 0 })
            })
    }
}

/// Standard matrix product mod m; moduli and inner dimensions must agree.
pub fn mat_mul(a: &ModMatrix, b: &ModMatrix) -> Result<ModMatrix> {
    if a.modulus != b.modulus {
        return Err(Error::ModulusMismatch(a.modulus, b.modulus));
    }
    if a.cols != b.rows {
        return Err(Error::DimensionMismatch(a.rows, a.cols, b.rows, b.cols));
    }
    let m = a.modulus;
    let mut out = vec![0u64; a.rows * b.cols];
    for i in 0..a.rows {
        for t in 0..a.cols {
            let av = a.get(i, t);
            if av == 0 {
                continue;
            }
            for j in 0..b.cols {
                let cell = &mut out[i * b.cols + j];
                *cell = (*cell + av * b.get(t, j)) % m;
            }
        }
    }
    ModMatrix::new(a.rows, b.cols, m, out)
}

/// Determinant mod m for any m >= 2, prime or not.
///
/// Euclid-style elimination on integer representatives: row pairs are
/// combined with integer quotients until a pivot survives, so no modular
/// inverses are needed and nothing grows past m.
pub fn mat_det(a: &ModMatrix) -> Result<u64> {
    if a.rows != a.cols {
        return Err(Error::DimensionMismatch(a.rows, a.cols, a.cols, a.rows));
    }
    let n = a.rows;
    let m = a.modulus;
    let mut e = a.entries.clone();
    let mut det = 1 % m;
    let mut negate = false;
    for col in 0..n {
        for row in col + 1..n {
            while e[row * n + col] != 0 {
                let q = e[col * n + col] / e[row * n + col];
                for j in col..n {
                    let sub = q * e[row * n + j] % m;
                    e[col * n + j] = (e[col * n + j] + m - sub) % m;
                }
                for j in col..n {
                    e.swap(col * n + j, row * n + j);
                }
                negate = !negate;
            }
        }
        let pivot = e[col * n + col];
        if pivot == 0 {
            return Ok(0);
        }
        det = det * pivot % m;
    }
    if negate {
        det = (m - det) % m;
    }
    Ok(det)
}

/// Inverse as adjugate over determinant; defined over Z_m whenever the
/// determinant is a unit.
pub fn mat_inverse_generic(a: &ModMatrix) -> Result<ModMatrix> {
    if a.rows != a.cols {
        return Err(Error::DimensionMismatch(a.rows, a.cols, a.cols, a.rows));
    }
    let n = a.rows;
    let m = a.modulus;
    let det = mat_det(a)?;
    let det_inv = mod_inv(det, m).map_err(|_| Error::MatrixNotInvertible(m, det))?;
    if n == 1 {
        return ModMatrix::new(1, 1, m, vec![det_inv]);
    }
    let mut out = vec![0u64; n * n];
    for i in 0..n {
        for j in 0..n {
            let minor = minor_of(a, i, j)?;
            let cof = mat_det(&minor)?;
            let signed = if (i + j) % 2 == 0 { cof } else { (m - cof) % m };
            // Adjugate is the transposed cofactor matrix.
            out[j * n + i] = signed * det_inv % m;
        }
    }
    ModMatrix::new(n, n, m, out)
}

fn minor_of(a: &ModMatrix, skip_row: usize, skip_col: usize) -> Result<ModMatrix> {
    let n = a.rows;
    let mut entries = Vec::with_capacity((n - 1) * (n - 1));
    for i in 0..n {
        if i == skip_row {
            continue;
        }
        for j in 0..n {
            if j == skip_col {
                continue;
            }
            entries.push(a.get(i, j));
        }
    }
    ModMatrix::new(n - 1, n - 1, a.modulus, entries)
}

/// A λ x λ multinacci matrix mod m, tagged with the power k it represents.
///
/// The tag is provenance for display only; verification code recomputes.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct QMatrix {
    pub order: MultinacciOrder,
    pub power: i64,
    matrix: ModMatrix,
}

impl QMatrix {
    pub fn matrix(&self) -> &ModMatrix {
        &self.matrix
    }

    pub fn modulus(&self) -> u64 {
        self.matrix.modulus
    }

    pub fn get(&self, i: usize, j: usize) -> u64 {
        self.matrix.get(i, j)
    }

    /// Row-major entry rows, for display and serialization.
    pub fn rows_vec(&self) -> Vec<Vec<u64>> {
        let n = self.order.get();
        (0..n)
            .map(|i| (0..n).map(|j| self.matrix.get(i, j)).collect())
            .collect()
    }
}

/// The companion matrix Q_λ mod m: first row all ones, ones on the
/// subdiagonal, zeros elsewhere.
pub fn q_matrix(order: MultinacciOrder, m: u64) -> Result<QMatrix> {
    let n = order.get();
    let mut entries = vec![0u64; n * n];
    entries[..n].fill(1);
    for i in 1..n {
        entries[i * n + (i - 1)] = 1;
    }
    Ok(QMatrix {
        order,
        power: 1,
        matrix: ModMatrix::new(n, n, m, entries)?,
    })
}

/// The inverse companion Q_λ^{-1}: shifted identity with last row
/// [1, -1, ..., -1].
fn q_matrix_inverse(order: MultinacciOrder, m: u64) -> Result<ModMatrix> {
    let n = order.get();
    let mut entries = vec![0i64; n * n];
    for i in 0..n - 1 {
        entries[i * n + (i + 1)] = 1;
    }
    entries[(n - 1) * n] = 1;
    for j in 1..n {
        entries[(n - 1) * n + j] = -1;
    }
    ModMatrix::from_signed(n, n, m, &entries)
}

/// Q_λ^k mod m for any signed k, assembled from one sequence window:
/// entry (i, 0) is f_{k+λ-1-i} and entry (i, j>=1) is the partial sum
/// f_{k+λ-2-i} + ... + f_{k+λ-1-i-(λ-j)}. Negative k uses backward-extended
/// terms, never generic inversion; k = 0 is the identity.
///
/// ```
/// use fibhill::multinacci::MultinacciOrder;
/// use fibhill::qmatrix::{mat_mul, q_power};
///
/// let order = MultinacciOrder::new(3)?;
/// let key = q_power(order, 4, 37)?;
/// assert_eq!(key.rows_vec(), vec![vec![7, 6, 4], vec![4, 3, 2], vec![2, 2, 1]]);
///
/// let key_inv = q_power(order, -4, 37)?;
/// assert!(mat_mul(key.matrix(), key_inv.matrix())?.is_identity());
/// # Ok::<(), fibhill::Error>(())
/// ```
pub fn q_power(order: MultinacciOrder, k: i64, m: u64) -> Result<QMatrix> {
    let n = order.get();
    if k.abs() > Q_POWER_MATMUL_THRESHOLD {
        let base = if k > 0 {
            q_matrix(order, m)?.matrix
        } else {
            q_matrix_inverse(order, m)?
        };
        let mut acc = ModMatrix::identity(n, m)?;
        let mut sq = base;
        let mut e = k.unsigned_abs();
        while e > 0 {
            if e & 1 == 1 {
                acc = mat_mul(&acc, &sq)?;
            }
            sq = mat_mul(&sq, &sq)?;
            e >>= 1;
        }
        return Ok(QMatrix {
            order,
            power: k,
            matrix: acc,
        });
    }

    let lambda = n as i64;
    let w = multinacci::terms(order, k - lambda - 1, k + lambda - 1, Some(m))?;
    let f = |idx: i64| w.term(idx) as u64;
    let mut entries = vec![0u64; n * n];
    for i in 0..n {
        let top = k + lambda - 1 - i as i64;
        entries[i * n] = f(top);
        for j in 1..n {
            let mut sum = 0u64;
            for t in 1..=(n - j) as i64 {
                sum = (sum + f(top - t)) % m;
            }
            entries[i * n + j] = sum;
        }
    }
    Ok(QMatrix {
        order,
        power: k,
        matrix: ModMatrix::new(n, n, m, entries)?,
    })
}

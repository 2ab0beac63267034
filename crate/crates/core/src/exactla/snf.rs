use super::matrix::{IntMatrix, MatrixError};
use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

/// Smith normal form U * A * V = S with U, V unimodular and S diagonal with
/// a nonnegative divisibility chain d1 | d2 | ... (trailing zeros allowed).
#[derive(Debug, Clone)]
pub struct SmithDecomposition {
    pub u: IntMatrix,
    pub s: IntMatrix,
    pub v: IntMatrix,
}

impl SmithDecomposition {
    /// Diagonal of S up to min(rows, cols).
    pub fn diagonal(&self) -> Vec<BigInt> {
        let k = self.s.rows().min(self.s.cols());
        (0..k).map(|i| self.s.get(i, i).clone()).collect()
    }

    /// Number of nonzero diagonal entries, i.e. the rank of the input.
    pub fn rank(&self) -> usize {
        self.diagonal().iter().filter(|d| !d.is_zero()).count()
    }
}

/// Computes the Smith normal form. Pivot strategy: smallest nonzero absolute
/// value in the remaining submatrix, ties broken by lowest (row, col), so the
/// output is deterministic for a fixed input.
pub fn smith_normal_form(a: &IntMatrix) -> SmithDecomposition {
    let rows = a.rows();
    let cols = a.cols();
    let mut s = a.clone();
    let mut u = IntMatrix::identity(rows);
    let mut v = IntMatrix::identity(cols);
    let k = rows.min(cols);

    'stages: for t in 0..k {
        loop {
            // Smallest nonzero |entry|; row-major scan with strict comparison
            // gives the lowest-index tie-break.
            let mut pivot: Option<(usize, usize)> = None;
            for i in t..rows {
                for j in t..cols {
                    if s.get(i, j).is_zero() {
                        continue;
                    }
                    let better = match pivot {
                        None => true,
                        Some((pi, pj)) => s.get(i, j).abs() < s.get(pi, pj).abs(),
                    };
                    if better {
                        pivot = Some((i, j));
                    }
                }
            }
            let Some((pi, pj)) = pivot else {
                break 'stages; // remaining submatrix is zero
            };
            s.swap_rows(t, pi);
            u.swap_rows(t, pi);
            s.swap_cols(t, pj);
            v.swap_cols(t, pj);

            let mut clean = true;
            for i in t + 1..rows {
                if s.get(i, t).is_zero() {
                    continue;
                }
                let q = s.get(i, t).div_floor(s.get(t, t));
                if !q.is_zero() {
                    let nq = -q;
                    s.add_row_multiple(i, t, &nq);
                    u.add_row_multiple(i, t, &nq);
                }
                if !s.get(i, t).is_zero() {
                    clean = false;
                }
            }
            for j in t + 1..cols {
                if s.get(t, j).is_zero() {
                    continue;
                }
                let q = s.get(t, j).div_floor(s.get(t, t));
                if !q.is_zero() {
                    let nq = -q;
                    s.add_col_multiple(j, t, &nq);
                    v.add_col_multiple(j, t, &nq);
                }
                if !s.get(t, j).is_zero() {
                    clean = false;
                }
            }
            if !clean {
                continue;
            }
            // Pivot must divide the rest of the submatrix for the chain.
            let p = s.get(t, t).clone();
            let mut offender = None;
            'scan: for i in t + 1..rows {
                for j in t + 1..cols {
                    if !s.get(i, j).mod_floor(&p).is_zero() {
                        offender = Some(i);
                        break 'scan;
                    }
                }
            }
            match offender {
                Some(i) => {
                    let one = BigInt::one();
                    s.add_row_multiple(t, i, &one);
                    u.add_row_multiple(t, i, &one);
                }
                None => break,
            }
        }
    }

    for t in 0..k {
        if s.get(t, t).is_negative() {
            s.negate_row(t);
            u.negate_row(t);
        }
    }

    SmithDecomposition { u, s, v }
}

/// Solves A * x = b over the integers. Returns None when no integral solution
/// exists; errors only on shape mismatch.
pub fn lattice_solve(a: &IntMatrix, b: &[BigInt]) -> Result<Option<Vec<BigInt>>, MatrixError> {
    if b.len() != a.rows() {
        return Err(MatrixError::Dimension(format!(
            "lattice_solve: {} rows vs vector of length {}",
            a.rows(),
            b.len()
        )));
    }
    let dec = smith_normal_form(a);
    let c = dec.u.mul_vec(b)?;
    let k = a.rows().min(a.cols());
    let mut y = vec![BigInt::zero(); a.cols()];
    for i in 0..a.rows() {
        let d = if i < k {
            dec.s.get(i, i).clone()
        } else {
            BigInt::zero()
        };
        if d.is_zero() {
            if !c[i].is_zero() {
                return Ok(None);
            }
        } else {
            let (q, r) = c[i].div_rem(&d);
            if !r.is_zero() {
                return Ok(None);
            }
            y[i] = q;
        }
    }
    Ok(Some(dec.v.mul_vec(&y)?))
}

/// Columns generating the kernel lattice {x : A * x = 0}.
pub fn kernel_basis(a: &IntMatrix) -> IntMatrix {
    let dec = smith_normal_form(a);
    let k = a.rows().min(a.cols());
    let free: Vec<usize> = (0..a.cols())
        .filter(|&j| j >= k || dec.s.get(j, j).is_zero())
        .collect();
    IntMatrix::from_fn(a.cols(), free.len(), |i, j| dec.v.get(i, free[j]).clone())
}

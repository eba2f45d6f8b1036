//! Index bookkeeping for operators on a tensor product of subsystems.

use super::{CMatrix, C64};

pub fn total_dim(dims: &[usize]) -> usize {
    dims.iter().product()
}

/// Row-major digits of `index` over `dims`.
pub fn digits(mut index: usize, dims: &[usize]) -> Vec<usize> {
    let mut out = vec![0; dims.len()];
    for k in (0..dims.len()).rev() {
        out[k] = index % dims[k];
        index /= dims[k];
    }
    out
}

/// Splits every full index into a joint index over `group` (in the order
/// given) and a joint index over the remaining subsystems (in original order).
pub struct Split {
    /// `group_of[i]` for every full index `i`.
    pub group_of: Vec<usize>,
    pub group_dim: usize,
    pub rest_dim: usize,
    /// `table[rest * group_dim + g]` is the full index.
    pub table: Vec<usize>,
}

impl Split {
    pub fn new(dims: &[usize], group: &[usize]) -> Split {
        let rest: Vec<usize> = (0..dims.len()).filter(|k| !group.contains(k)).collect();
        let group_dim: usize = group.iter().map(|&k| dims[k]).product();
        let rest_dim: usize = rest.iter().map(|&k| dims[k]).product();
        let n = total_dim(dims);
        let mut group_of = vec![0; n];
        let mut table = vec![0; n];
        for (i, slot) in group_of.iter_mut().enumerate() {
            let d = digits(i, dims);
            let g = group.iter().fold(0, |acc, &k| acc * dims[k] + d[k]);
            let r = rest.iter().fold(0, |acc, &k| acc * dims[k] + d[k]);
            *slot = g;
            table[r * group_dim + g] = i;
        }
        Split {
            group_of,
            group_dim,
            rest_dim,
            table,
        }
    }
}

/// `(op ⊗ I) · mat` with `op` acting on the subsystems in `group`.
pub fn apply_left(mat: &CMatrix, split: &Split, op: &CMatrix) -> CMatrix {
    let g = split.group_dim;
    debug_assert_eq!(op.nrows(), g);
    let mut out = CMatrix::zeros(mat.nrows(), mat.ncols());
    let mut buf = vec![C64::new(0.0, 0.0); g];
    for col in 0..mat.ncols() {
        for r in 0..split.rest_dim {
            let rows = &split.table[r * g..(r + 1) * g];
            for (t, &row) in rows.iter().enumerate() {
                buf[t] = mat[(row, col)];
            }
            for (t_out, &row) in rows.iter().enumerate() {
                let mut acc = C64::new(0.0, 0.0);
                for (t, v) in buf.iter().enumerate() {
                    acc += op[(t_out, t)] * v;
                }
                out[(row, col)] = acc;
            }
        }
    }
    out
}

/// `(op ⊗ I) · mat · (op ⊗ I)†`, valid for any square `mat`.
pub fn conjugate(mat: &CMatrix, split: &Split, op: &CMatrix) -> CMatrix {
    let left = apply_left(mat, split, op);
    apply_left(&left.adjoint(), split, op).adjoint()
}

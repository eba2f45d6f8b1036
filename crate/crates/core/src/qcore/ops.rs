use super::layout::{digits, total_dim, Split};
use super::{hermitian_eigenvalues, CMatrix, ProductBasis, QState, C64};
use crate::error::{Error, Result};

/// Kronecker product; dims concatenate.
pub fn tensor(a: &QState, b: &QState) -> QState {
    let dims = [a.dims(), b.dims()].concat();
    QState::from_positive(dims, a.matrix().kronecker(b.matrix())).expect("tensor product of valid states is valid")
}

/// Sorted, deduplicated and range-checked subsystem indices.
pub(crate) fn normalize_subset(indices: &[usize], n: usize) -> Result<Vec<usize>> {
    let mut out = indices.to_vec();
    out.sort_unstable();
    out.dedup();
    if out.len() != indices.len() {
        return Err(Error::InvalidSubsystem(format!("repeated index in {indices:?}")));
    }
    if let Some(&bad) = out.iter().find(|&&k| k >= n) {
        return Err(Error::InvalidSubsystem(format!(
            "index {bad} out of range for {n} subsystems"
        )));
    }
    Ok(out)
}

/// Reduced state on `keep`; dims come back in original order.
pub fn partial_trace(s: &QState, keep: &[usize]) -> Result<QState> {
    if keep.is_empty() {
        return Err(Error::EmptyKeep);
    }
    let keep = normalize_subset(keep, s.num_subsystems())?;
    let dims = s.dims();
    let split = Split::new(dims, &keep);
    let (g, r) = (split.group_dim, split.rest_dim);
    let m = s.matrix();
    let mut out = CMatrix::zeros(g, g);
    for i in 0..g {
        for j in 0..g {
            let mut acc = C64::new(0.0, 0.0);
            for t in 0..r {
                acc += m[(split.table[t * g + i], split.table[t * g + j])];
            }
            out[(i, j)] = acc;
        }
    }
    QState::from_positive(keep.iter().map(|&k| dims[k]).collect(), out)
}

/// Conjugates `m` into the basis `b` on the subsystems in `subset`:
/// `B† m B` with `B = ⊗_{k∈subset} b_k`.
pub(crate) fn to_basis(m: &CMatrix, dims: &[usize], b: &ProductBasis, subset: &[usize]) -> CMatrix {
    let mut out = m.clone();
    for &k in subset {
        let split = Split::new(dims, &[k]);
        out = super::layout::conjugate(&out, &split, &b.local(k).adjoint());
    }
    out
}

/// Inverse of [`to_basis`].
pub(crate) fn from_basis(m: &CMatrix, dims: &[usize], b: &ProductBasis, subset: &[usize]) -> CMatrix {
    let mut out = m.clone();
    for &k in subset {
        let split = Split::new(dims, &[k]);
        out = super::layout::conjugate(&out, &split, b.local(k));
    }
    out
}

/// Zeroes every element whose indices differ on some subsystem of `subset`.
pub(crate) fn pinch(m: &CMatrix, dims: &[usize], subset: &[usize]) -> CMatrix {
    let split = Split::new(dims, subset);
    let mut out = m.clone();
    for i in 0..m.nrows() {
        for j in 0..m.ncols() {
            if split.group_of[i] != split.group_of[j] {
                out[(i, j)] = C64::new(0.0, 0.0);
            }
        }
    }
    out
}

/// Dephasing in basis `b` on the subsystems in `subset`.
pub fn dephase(s: &QState, b: &ProductBasis, subset: &[usize]) -> Result<QState> {
    if subset.is_empty() {
        return Err(Error::InvalidSubsystem("dephasing subset is empty".into()));
    }
    let subset = normalize_subset(subset, s.num_subsystems())?;
    b.check_dims(s.dims())?;
    let dims = s.dims();
    let rotated = to_basis(s.matrix(), dims, b, &subset);
    let pinched = pinch(&rotated, dims, &subset);
    QState::from_positive(dims.to_vec(), from_basis(&pinched, dims, b, &subset))
}

/// Partial transpose on subsystem `side`.
pub fn partial_transpose(s: &QState, side: usize) -> Result<CMatrix> {
    let dims = s.dims();
    if side >= dims.len() {
        return Err(Error::InvalidSubsystem(format!(
            "side {side} out of range for {} subsystems",
            dims.len()
        )));
    }
    let n = total_dim(dims);
    let stride: usize = dims[side + 1..].iter().product();
    let m = s.matrix();
    let mut out = CMatrix::zeros(n, n);
    for i in 0..n {
        let di = digits(i, dims)[side];
        for j in 0..n {
            let dj = digits(j, dims)[side];
            // swap the `side` digits of row and column
            let i2 = i - di * stride + dj * stride;
            let j2 = j - dj * stride + di * stride;
            out[(i2, j2)] = m[(i, j)];
        }
    }
    Ok(out)
}

/// Sum of the magnitudes of the negative eigenvalues of the partial
/// transpose. Bipartite states only.
pub fn negativity(s: &QState, side: usize) -> Result<f64> {
    if s.num_subsystems() != 2 {
        return Err(Error::NotBipartite(s.num_subsystems()));
    }
    let pt = partial_transpose(s, side)?;
    Ok(hermitian_eigenvalues(&pt)
        .into_iter()
        .filter(|&v| v < 0.0)
        .fold(0.0, |acc, v| acc - v))
}

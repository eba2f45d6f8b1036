//! Gate and channel constructors, and decision procedures for the
//! incoherence conditions on channels.

use rand::seq::SliceRandom;
use rand::Rng;
use serde::{Deserialize, Serialize};
use std::f64::consts::{FRAC_1_SQRT_2, TAU};

use crate::error::{Error, Result};
use crate::qcore::layout::{total_dim, Split};
use crate::qcore::ops::{from_basis, normalize_subset, to_basis};
use crate::qcore::{c, unitarity_residual, CMatrix, Gate, ProductBasis, QState, UNITARY_TOL};

/// Tolerance on the completeness relation `Σ K†K = I`.
pub const COMPLETENESS_TOL: f64 = 1e-10;
/// Entries below this magnitude count as zero in every checker.
pub const OFFDIAG_TOL: f64 = 1e-9;

/// A channel in Kraus form acting on the full space of `dims`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct KrausChannel {
    #[serde(with = "crate::serde_matrix::matrix_list")]
    kraus: Vec<CMatrix>,
    dims: Vec<usize>,
}

impl KrausChannel {
    pub fn new(kraus: Vec<CMatrix>, dims: Vec<usize>) -> Result<KrausChannel> {
        let n = total_dim(&dims);
        if kraus.is_empty() {
            return Err(Error::IncompleteChannel { residual: 1.0 });
        }
        if let Some(k) = kraus.iter().find(|k| k.nrows() != n || k.ncols() != n) {
            return Err(Error::DimensionMismatch(format!(
                "Kraus operator of shape {:?} for dims {dims:?}",
                k.shape()
            )));
        }
        let ch = KrausChannel { kraus, dims };
        let residual = ch.completeness_residual();
        if residual > COMPLETENESS_TOL {
            return Err(Error::IncompleteChannel { residual });
        }
        Ok(ch)
    }

    /// Single-Kraus channel of a gate embedded into `dims`.
    pub fn from_gate(g: &Gate, dims: &[usize]) -> Result<KrausChannel> {
        KrausChannel::new(vec![g.embed(dims)?], dims.to_vec())
    }

    pub fn identity(dims: &[usize]) -> KrausChannel {
        let n = total_dim(dims);
        KrausChannel {
            kraus: vec![CMatrix::identity(n, n)],
            dims: dims.to_vec(),
        }
    }

    /// Largest entry magnitude of `Σ K†K - I`.
    pub fn completeness_residual(&self) -> f64 {
        let n = total_dim(&self.dims);
        let sum = self
            .kraus
            .iter()
            .fold(CMatrix::zeros(n, n), |acc, k| acc + k.adjoint() * k);
        crate::qcore::max_abs_diff(&sum, &CMatrix::identity(n, n))
    }

    pub fn kraus(&self) -> &[CMatrix] {
        &self.kraus
    }

    pub fn dims(&self) -> &[usize] {
        &self.dims
    }

    /// True when the channel has a single unitary Kraus operator.
    pub fn is_unitary(&self) -> bool {
        self.kraus.len() == 1 && unitarity_residual(&self.kraus[0]) <= UNITARY_TOL
    }

    /// `Σ K X K†` for an arbitrary operator `X`.
    pub fn apply_operator(&self, x: &CMatrix) -> CMatrix {
        let n = x.nrows();
        self.kraus
            .iter()
            .fold(CMatrix::zeros(n, n), |acc, k| acc + k * x * k.adjoint())
    }

    /// Applies the channel and re-validates the output state.
    pub fn apply(&self, s: &QState) -> Result<QState> {
        if s.dims() != self.dims.as_slice() {
            return Err(Error::DimensionMismatch(format!(
                "channel on dims {:?} applied to state with dims {:?}",
                self.dims,
                s.dims()
            )));
        }
        QState::new(self.dims.clone(), self.apply_operator(s.matrix()))
    }

    /// `next ∘ self`.
    pub fn then(&self, next: &KrausChannel) -> Result<KrausChannel> {
        if self.dims != next.dims {
            return Err(Error::DimensionMismatch("composing channels on different dims".into()));
        }
        let kraus = next
            .kraus
            .iter()
            .flat_map(|l| self.kraus.iter().map(move |k| l * k))
            .collect();
        KrausChannel::new(kraus, self.dims.clone())
    }

    /// Convex combination `Σ w_i Λ_i`.
    pub fn mixture(parts: &[(f64, KrausChannel)]) -> Result<KrausChannel> {
        let dims = parts
            .first()
            .map(|(_, ch)| ch.dims.clone())
            .ok_or(Error::IncompleteChannel { residual: 1.0 })?;
        let mut kraus = Vec::new();
        for (w, ch) in parts {
            if *w < 0.0 || ch.dims != dims {
                return Err(Error::OutOfRange {
                    name: "mixture weight",
                    value: *w,
                });
            }
            if *w > 0.0 {
                kraus.extend(ch.kraus.iter().map(|k| k * c(w.sqrt(), 0.0)));
            }
        }
        KrausChannel::new(kraus, dims)
    }
}

fn real(re: f64) -> crate::qcore::C64 {
    c(re, 0.0)
}

/// `U_CZ |i>|j> = (-1)^{ij} |i>|j>` on qubits 0 and 1.
pub fn make_cz() -> Gate {
    let mut u = CMatrix::identity(4, 4);
    u[(3, 3)] = real(-1.0);
    Gate::new(u, vec![0, 1]).expect("CZ is unitary")
}

/// `U_CX |i>|j> = |i>|i ⊕ j>` with control on qubit 0.
pub fn make_cx() -> Gate {
    make_generalized_cnot(2)
}

/// `|i>|j> -> |i>|i + j mod d>` on two qudits.
pub fn make_generalized_cnot(d: usize) -> Gate {
    let mut u = CMatrix::zeros(d * d, d * d);
    for i in 0..d {
        for j in 0..d {
            u[(i * d + (i + j) % d, i * d + j)] = real(1.0);
        }
    }
    Gate::new(u, vec![0, 1]).expect("permutation is unitary")
}

pub fn make_hadamard() -> Gate {
    let h = CMatrix::from_row_slice(2, 2, &[real(1.0), real(1.0), real(1.0), real(-1.0)]) * real(FRAC_1_SQRT_2);
    Gate::new(h, vec![0]).expect("Hadamard is unitary")
}

/// `|0><0| ⊗ I + |1><1| ⊗ u`, control on target 0 and `u` on target 1.
pub fn make_controlled_u(u: &CMatrix) -> Result<Gate> {
    let residual = unitarity_residual(u);
    if residual > UNITARY_TOL {
        return Err(Error::NonUnitary { residual });
    }
    let d = u.nrows();
    let mut cu = CMatrix::identity(2 * d, 2 * d);
    cu.view_mut((d, d), (d, d)).copy_from(u);
    Gate::new(cu, vec![0, 1])
}

/// `ρ ↦ p U ρ U† + (1 - p) I/4` for a two-qubit gate. The replacement part
/// uses the Kraus family `|i><j| / 2`.
pub fn depolarize_mix(g: &Gate, p: f64) -> Result<KrausChannel> {
    if !(0.0..=1.0).contains(&p) {
        return Err(Error::OutOfRange { name: "p", value: p });
    }
    if g.unitary().nrows() != 4 {
        return Err(Error::DimensionMismatch(format!(
            "depolarize_mix needs a two-qubit gate, got side {}",
            g.unitary().nrows()
        )));
    }
    let dims = [2, 2];
    let u = g.embed(&dims)?;
    let n = 4;
    let mut kraus = Vec::new();
    if p > 0.0 {
        kraus.push(u * real(p.sqrt()));
    }
    if p < 1.0 {
        let w = ((1.0 - p) / n as f64).sqrt();
        for i in 0..n {
            for j in 0..n {
                let mut k = CMatrix::zeros(n, n);
                k[(i, j)] = real(w);
                kraus.push(k);
            }
        }
    }
    KrausChannel::new(kraus, dims.to_vec())
}

/// Full dephasing channel in the computational basis of the listed subsystems
/// (diagonal Kraus operators), mixed with the identity: `(1-q) id + q Φ`.
pub fn partial_dephasing(dims: &[usize], subset: &[usize], q: f64) -> Result<KrausChannel> {
    if !(0.0..=1.0).contains(&q) {
        return Err(Error::OutOfRange { name: "q", value: q });
    }
    let subset = normalize_subset(subset, dims.len())?;
    let split = Split::new(dims, &subset);
    let n = total_dim(dims);
    let projectors = (0..split.group_dim).map(|g| {
        CMatrix::from_fn(n, n, |i, j| {
            if i == j && split.group_of[i] == g {
                real(1.0)
            } else {
                real(0.0)
            }
        })
    });
    let dephasing = KrausChannel::new(projectors.collect(), dims.to_vec())?;
    KrausChannel::mixture(&[(1.0 - q, KrausChannel::identity(dims)), (q, dephasing)])
}

/// Uniformly random permutation of basis states composed with uniformly
/// random diagonal phases. These are exactly the incoherent unitaries.
pub fn random_incoherent_unitary<R: Rng + ?Sized>(dim: usize, rng: &mut R) -> CMatrix {
    let mut perm: Vec<usize> = (0..dim).collect();
    perm.shuffle(rng);
    let mut u = CMatrix::zeros(dim, dim);
    for (col, &row) in perm.iter().enumerate() {
        let phase: f64 = rng.random::<f64>() * TAU;
        u[(row, col)] = c(phase.cos(), phase.sin());
    }
    u
}

/// Why a channel failed an incoherence check.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub enum Witness {
    /// `Λ(|i><i|)` has an off-diagonal element of this magnitude.
    Mio { input: usize, max_offdiag: f64 },
    /// Kraus operator `operator` has `nonzeros` significant entries in `column`.
    Kraus {
        operator: usize,
        column: usize,
        nonzeros: usize,
    },
    /// `Λ(|i><i|_A ⊗ |j><k|_B)` has an A-off-diagonal block entry of this size.
    AIncoherent {
        a_index: usize,
        b_row: usize,
        b_col: usize,
        max_offblock: f64,
    },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CheckOutcome {
    pub passed: bool,
    pub witness: Option<Witness>,
}

impl CheckOutcome {
    fn pass() -> Self {
        CheckOutcome {
            passed: true,
            witness: None,
        }
    }

    fn fail(w: Witness) -> Self {
        CheckOutcome {
            passed: false,
            witness: Some(w),
        }
    }
}

fn check_basis(ch: &KrausChannel, b: &ProductBasis) -> Result<()> {
    if b.dims() != ch.dims {
        return Err(Error::DimensionMismatch(format!(
            "basis dims {:?} vs channel dims {:?}",
            b.dims(),
            ch.dims
        )));
    }
    Ok(())
}

/// Maximally incoherent operation check: every basis projector must map to
/// a state diagonal in `b`. Linearity extends this to all incoherent states.
pub fn check_mio(ch: &KrausChannel, b: &ProductBasis) -> Result<CheckOutcome> {
    check_basis(ch, b)?;
    let big_b = b.matrix();
    let n = big_b.nrows();
    for i in 0..n {
        let v = big_b.column(i);
        let input = v * v.adjoint();
        let out = big_b.adjoint() * ch.apply_operator(&input) * &big_b;
        let mut worst = 0.0_f64;
        for r in 0..n {
            for col in 0..n {
                if r != col {
                    worst = worst.max(out[(r, col)].norm());
                }
            }
        }
        if worst > OFFDIAG_TOL {
            return Ok(CheckOutcome::fail(Witness::Mio {
                input: i,
                max_offdiag: worst,
            }));
        }
    }
    Ok(CheckOutcome::pass())
}

/// Kraus-level incoherence: in basis `b`, every Kraus operator has at most
/// one significant entry per column.
pub fn check_kraus_incoherent(ch: &KrausChannel, b: &ProductBasis) -> Result<CheckOutcome> {
    check_basis(ch, b)?;
    let big_b = b.matrix();
    for (idx, k) in ch.kraus.iter().enumerate() {
        let rotated = big_b.adjoint() * k * &big_b;
        for col in 0..rotated.ncols() {
            let nonzeros = rotated.column(col).iter().filter(|z| z.norm() > OFFDIAG_TOL).count();
            if nonzeros > 1 {
                return Ok(CheckOutcome::fail(Witness::Kraus {
                    operator: idx,
                    column: col,
                    nonzeros,
                }));
            }
        }
    }
    Ok(CheckOutcome::pass())
}

/// A-incoherent operation check: the channel must keep operators that are
/// block diagonal on the `A` subsystems (in `b`) block diagonal. Decided on
/// the spanning set `|i><i|_A ⊗ |j><k|_B`.
pub fn check_a_incoherent(ch: &KrausChannel, a_indices: &[usize], b: &ProductBasis) -> Result<CheckOutcome> {
    check_basis(ch, b)?;
    let n_sub = ch.dims.len();
    let a = normalize_subset(a_indices, n_sub)?;
    if a.is_empty() || a.len() == n_sub {
        return Err(Error::InvalidSubsystem("A must be a proper nonempty subset".into()));
    }
    let dims = &ch.dims;
    let split = Split::new(dims, &a);
    let (ga, gb) = (split.group_dim, split.rest_dim);
    let n = ga * gb;
    for i in 0..ga {
        for j in 0..gb {
            for k in 0..gb {
                // built in the rotated frame, then taken back to the lab frame
                let mut x = CMatrix::zeros(n, n);
                x[(split.table[j * ga + i], split.table[k * ga + i])] = real(1.0);
                let x = from_basis(&x, dims, b, &a);
                let y = to_basis(&ch.apply_operator(&x), dims, b, &a);
                let mut worst = 0.0_f64;
                for r in 0..n {
                    for col in 0..n {
                        if split.group_of[r] != split.group_of[col] {
                            worst = worst.max(y[(r, col)].norm());
                        }
                    }
                }
                if worst > OFFDIAG_TOL {
                    return Ok(CheckOutcome::fail(Witness::AIncoherent {
                        a_index: i,
                        b_row: j,
                        b_col: k,
                        max_offblock: worst,
                    }));
                }
            }
        }
    }
    Ok(CheckOutcome::pass())
}

#[cfg(test)]
mod tests;

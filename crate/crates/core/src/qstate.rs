//! Two-qubit states, local noise channels, the noisy Bell measurement used at
//! repeater stations, and the usual entanglement / nonlocality witnesses.
//!
//! Basis ordering is `|00>, |01>, |10>, |11>` with the first tensor factor
//! as the most significant bit. The Bell vectors follow the labelling used
//! throughout this crate:
//!
//! * `Ψ± = (|00> ± |11>)/√2`
//! * `Φ± = (|01> ± |10>)/√2`
//!
//! so `Ψ+` is the maximally entangled reference state every fidelity is
//! measured against.

use nalgebra::{Matrix2, Matrix3, Matrix4, SymmetricEigen, Vector4};
use num_complex::Complex64;
use std::fmt;

use crate::error::QStateError;

pub type C64 = Complex64;

const HERMITIAN_TOL: f64 = 1e-12;
const TRACE_TOL: f64 = 1e-12;
const PSD_TOL: f64 = 1e-10;
/// Eigenvalues in `[-EIGEN_CLAMP, 0)` are treated as zero before square roots.
const EIGEN_CLAMP: f64 = 1e-10;

fn c(re: f64) -> C64 {
    C64::new(re, 0.0)
}

fn clamp_eigen(x: f64) -> f64 {
    if x < 0.0 && x >= -EIGEN_CLAMP {
        0.0
    } else {
        x.max(0.0)
    }
}

/// Single-qubit Pauli matrices in `(I, X, Y, Z)` order.
pub fn pauli(index: usize) -> Matrix2<C64> {
    let zero = c(0.0);
    let one = c(1.0);
    let i = C64::new(0.0, 1.0);
    match index {
        0 => Matrix2::identity(),
        1 => Matrix2::new(zero, one, one, zero),
        2 => Matrix2::new(zero, -i, i, zero),
        3 => Matrix2::new(one, zero, zero, -one),
        _ => panic!("pauli index out of range: {index}"),
    }
}

/// Kronecker product of two single-qubit operators.
pub fn kron2(a: &Matrix2<C64>, b: &Matrix2<C64>) -> Matrix4<C64> {
    Matrix4::from_fn(|r, col| a[(r / 2, col / 2)] * b[(r % 2, col % 2)])
}

/// The four Bell states.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum BellKind {
    PsiPlus,
    PsiMinus,
    PhiPlus,
    PhiMinus,
}

impl BellKind {
    pub const ALL: [BellKind; 4] = [
        BellKind::PsiMinus,
        BellKind::PsiPlus,
        BellKind::PhiMinus,
        BellKind::PhiPlus,
    ];

    pub fn vector(self) -> Vector4<C64> {
        let h = std::f64::consts::FRAC_1_SQRT_2;
        let (a, b, cc, d) = match self {
            BellKind::PsiPlus => (h, 0.0, 0.0, h),
            BellKind::PsiMinus => (h, 0.0, 0.0, -h),
            BellKind::PhiPlus => (0.0, h, h, 0.0),
            BellKind::PhiMinus => (0.0, h, -h, 0.0),
        };
        Vector4::new(c(a), c(b), c(cc), c(d))
    }

    /// Local unitary acting on the second qubit that maps this Bell vector
    /// onto `Ψ+` (up to a global phase).
    pub fn correction(self) -> Matrix2<C64> {
        match self {
            BellKind::PsiPlus => pauli(0),
            BellKind::PsiMinus => pauli(3),
            BellKind::PhiPlus => pauli(1),
            BellKind::PhiMinus => pauli(1) * pauli(3),
        }
    }
}

impl fmt::Display for BellKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            BellKind::PsiPlus => "Psi+",
            BellKind::PsiMinus => "Psi-",
            BellKind::PhiPlus => "Phi+",
            BellKind::PhiMinus => "Phi-",
        };
        f.write_str(s)
    }
}

/// A validated two-qubit density operator.
#[derive(Debug, Clone, PartialEq)]
pub struct TwoQubitState {
    matrix: Matrix4<C64>,
}

impl TwoQubitState {
    /// Validates Hermiticity, unit trace and positivity.
    pub fn new(matrix: Matrix4<C64>) -> Result<Self, QStateError> {
        for r in 0..4 {
            for col in 0..4 {
                let d = matrix[(r, col)] - matrix[(col, r)].conj();
                if d.norm() > HERMITIAN_TOL {
                    return Err(QStateError::NotHermitian(d.norm()));
                }
            }
        }
        let tr = matrix.trace();
        if (tr.re - 1.0).abs() > TRACE_TOL || tr.im.abs() > TRACE_TOL {
            return Err(QStateError::BadTrace(tr.re));
        }
        let min_eig = hermitian_eigenvalues(&matrix)
            .iter()
            .copied()
            .fold(f64::INFINITY, f64::min);
        if min_eig < -PSD_TOL {
            return Err(QStateError::NotPositive(min_eig));
        }
        Ok(TwoQubitState { matrix })
    }

    /// Skips validation; used internally for results of trace-preserving maps.
    pub(crate) fn from_trusted(matrix: Matrix4<C64>) -> Self {
        // Re-symmetrise to keep round-off from accumulating.
        let m = (matrix + matrix.adjoint()) * c(0.5);
        TwoQubitState { matrix: m }
    }

    pub fn matrix(&self) -> &Matrix4<C64> {
        &self.matrix
    }

    pub fn maximally_mixed() -> Self {
        TwoQubitState {
            matrix: Matrix4::identity() * c(0.25),
        }
    }

    /// Projector onto a computational basis state `|ab>`.
    pub fn basis(index: usize) -> Self {
        assert!(index < 4, "basis index out of range");
        let mut m = Matrix4::zeros();
        m[(index, index)] = c(1.0);
        TwoQubitState { matrix: m }
    }

    pub fn trace(&self) -> f64 {
        self.matrix.trace().re
    }

    pub fn purity(&self) -> f64 {
        (self.matrix * self.matrix).trace().re
    }

    /// `Tr(ρσ)`; equals the fidelity whenever either argument is pure.
    pub fn overlap(&self, other: &TwoQubitState) -> f64 {
        (self.matrix * other.matrix).trace().re
    }

    pub fn eigenvalues(&self) -> [f64; 4] {
        hermitian_eigenvalues(&self.matrix)
    }

    /// Applies a local unitary `u_a ⊗ u_b`.
    pub fn conjugate_local(&self, u_a: &Matrix2<C64>, u_b: &Matrix2<C64>) -> TwoQubitState {
        let u = kron2(u_a, u_b);
        TwoQubitState::from_trusted(u * self.matrix * u.adjoint())
    }

    /// Reduced state of qubit 0 (`first = true`) or qubit 1.
    pub fn marginal(&self, first: bool) -> Matrix2<C64> {
        let mut out = Matrix2::zeros();
        for a in 0..2 {
            for a2 in 0..2 {
                let mut acc = c(0.0);
                for b in 0..2 {
                    acc += if first {
                        self.matrix[(2 * a + b, 2 * a2 + b)]
                    } else {
                        self.matrix[(2 * b + a, 2 * b + a2)]
                    };
                }
                out[(a, a2)] = acc;
            }
        }
        out
    }

    /// Distance in max-abs-entry norm, handy for tests.
    pub fn max_abs_diff(&self, other: &TwoQubitState) -> f64 {
        (self.matrix - other.matrix)
            .iter()
            .map(|z| z.norm())
            .fold(0.0, f64::max)
    }
}

fn hermitian_eigenvalues(m: &Matrix4<C64>) -> [f64; 4] {
    let herm = (m + m.adjoint()) * c(0.5);
    let eig = SymmetricEigen::new(herm);
    let mut v = [0.0; 4];
    for (i, x) in eig.eigenvalues.iter().enumerate() {
        v[i] = *x;
    }
    v.sort_by(|a, b| b.partial_cmp(a).unwrap());
    v
}

/// Rank-one projector onto the named Bell vector.
pub fn make_bell(kind: BellKind) -> TwoQubitState {
    let v = kind.vector();
    TwoQubitState {
        matrix: v * v.adjoint(),
    }
}

fn check_unit(name: &'static str, value: f64) -> Result<(), QStateError> {
    if !(0.0..=1.0).contains(&value) || value.is_nan() {
        return Err(QStateError::OutOfRange {
            name,
            value,
            range: "[0, 1]",
        });
    }
    Ok(())
}

/// `λ Ψ+ + (1 − λ) I/4`.
pub fn make_isotropic(visibility: f64) -> Result<TwoQubitState, QStateError> {
    check_unit("visibility", visibility)?;
    let psi = make_bell(BellKind::PsiPlus).matrix;
    let m = psi * c(visibility) + Matrix4::identity() * c((1.0 - visibility) / 4.0);
    Ok(TwoQubitState { matrix: m })
}

/// Two-qubit Werner state `λ Ψ− + (1 − λ) I/4` with `λ ∈ [−1/3, 1]`.
pub fn make_werner(visibility: f64) -> Result<TwoQubitState, QStateError> {
    if !(-1.0 / 3.0..=1.0).contains(&visibility) {
        return Err(QStateError::OutOfRange {
            name: "visibility",
            value: visibility,
            range: "[-1/3, 1]",
        });
    }
    let psi = make_bell(BellKind::PsiMinus).matrix;
    let m = psi * c(visibility) + Matrix4::identity() * c((1.0 - visibility) / 4.0);
    Ok(TwoQubitState { matrix: m })
}

/// `<Ψ+|ρ|Ψ+>`, the singlet fraction with respect to `Ψ+`.
pub fn fidelity_psi_plus(rho: &TwoQubitState) -> f64 {
    fidelity_bell(rho, BellKind::PsiPlus)
}

pub fn fidelity_bell(rho: &TwoQubitState, kind: BellKind) -> f64 {
    let v = kind.vector();
    (v.adjoint() * rho.matrix * v)[(0, 0)].re
}

/// Isotropic visibility `(4F − 1)/3` implied by a `Ψ+` fidelity.
pub fn visibility_from_fidelity(fidelity: f64) -> f64 {
    (4.0 * fidelity - 1.0) / 3.0
}

/// Local single-qubit noise models.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum ChannelModel {
    /// `ρ ↦ (1 − p) ρ + p I/2`, `p ∈ [0, 4/3]`.
    Depolarizing { p: f64 },
    /// Erasure with survival probability `eta_e`.
    Erasure { eta_e: f64 },
    /// Thermal (generalised amplitude damping) channel with transmissivity
    /// `eta_g` and environment occupation `kappa_g`.
    Thermal { eta_g: f64, kappa_g: f64 },
}

impl ChannelModel {
    pub fn depolarizing(p: f64) -> Result<Self, QStateError> {
        if !(0.0..=4.0 / 3.0).contains(&p) {
            return Err(QStateError::OutOfRange {
                name: "p",
                value: p,
                range: "[0, 4/3]",
            });
        }
        Ok(ChannelModel::Depolarizing { p })
    }

    pub fn erasure(eta_e: f64) -> Result<Self, QStateError> {
        check_unit("eta_e", eta_e)?;
        Ok(ChannelModel::Erasure { eta_e })
    }

    pub fn thermal(eta_g: f64, kappa_g: f64) -> Result<Self, QStateError> {
        check_unit("eta_g", eta_g)?;
        check_unit("kappa_g", kappa_g)?;
        Ok(ChannelModel::Thermal { eta_g, kappa_g })
    }

    /// Kraus operators on the qubit subspace.
    ///
    /// For erasure the flag (vacuum) output lives outside the qubit space;
    /// the returned set is the qubit-to-(qubit ⊕ vacuum) isometry restricted
    /// to its two blocks, `{√η I}` on the qubit block and the vacuum
    /// projections `√(1−η) |e><0|`, `√(1−η) |e><1|` represented here by
    /// their 2×2 lift `√(1−η) |0><k|`. Completeness holds either way.
    pub fn kraus(&self) -> Vec<Matrix2<C64>> {
        match *self {
            ChannelModel::Depolarizing { p } => {
                let k0 = (1.0 - 0.75 * p).max(0.0).sqrt();
                let ki = p.sqrt() / 2.0;
                vec![
                    pauli(0) * c(k0),
                    pauli(1) * c(ki),
                    pauli(2) * c(ki),
                    pauli(3) * c(ki),
                ]
            }
            ChannelModel::Erasure { eta_e } => {
                let s = (1.0 - eta_e).sqrt();
                let z = c(0.0);
                vec![
                    Matrix2::identity() * c(eta_e.sqrt()),
                    Matrix2::new(c(s), z, z, z),
                    Matrix2::new(z, c(s), z, z),
                ]
            }
            ChannelModel::Thermal { eta_g, kappa_g } => {
                let z = c(0.0);
                let a1 = Matrix2::new(c(1.0), z, z, c(eta_g.sqrt())) * c((1.0 - kappa_g).sqrt());
                let a2 = Matrix2::new(z, c(((1.0 - eta_g) * (1.0 - kappa_g)).sqrt()), z, z);
                let a3 = Matrix2::new(c(eta_g.sqrt()), z, z, c(1.0)) * c(kappa_g.sqrt());
                let a4 = Matrix2::new(z, z, c((kappa_g * (1.0 - eta_g)).sqrt()), z);
                vec![a1, a2, a3, a4]
            }
        }
    }

    /// Largest entry-wise deviation of `Σ K†K` from the identity.
    pub fn completeness_error(&self) -> f64 {
        let sum = self
            .kraus()
            .iter()
            .fold(Matrix2::<C64>::zeros(), |acc, k| acc + k.adjoint() * k);
        (sum - Matrix2::identity())
            .iter()
            .map(|z| z.norm())
            .fold(0.0, f64::max)
    }
}

/// Result of sending both halves of a pair through the same local channel.
#[derive(Debug, Clone, PartialEq)]
pub enum PairChannelOutput {
    State(TwoQubitState),
    /// Erasure is described by the probability that neither qubit was lost
    /// and the (unchanged) conditional state in that event.
    Erasure {
        p_both_arrive: f64,
        conditional_state: TwoQubitState,
    },
}

impl PairChannelOutput {
    /// The qubit-space state; for erasure, the post-selected state.
    pub fn state(&self) -> &TwoQubitState {
        match self {
            PairChannelOutput::State(s) => s,
            PairChannelOutput::Erasure {
                conditional_state, ..
            } => conditional_state,
        }
    }

    /// Probability mass carried by `state()`; 1 except for erasure.
    pub fn weight(&self) -> f64 {
        match self {
            PairChannelOutput::State(_) => 1.0,
            PairChannelOutput::Erasure { p_both_arrive, .. } => *p_both_arrive,
        }
    }
}

/// Applies a channel independently to both qubits of `rho` via its Kraus set.
pub fn apply_kraus_both(rho: &TwoQubitState, kraus: &[Matrix2<C64>]) -> TwoQubitState {
    let mut out = Matrix4::zeros();
    for ka in kraus {
        for kb in kraus {
            let k = kron2(ka, kb);
            out += k * rho.matrix * k.adjoint();
        }
    }
    TwoQubitState::from_trusted(out)
}

pub fn apply_pair_channel(rho: &TwoQubitState, channel: &ChannelModel) -> PairChannelOutput {
    match *channel {
        ChannelModel::Erasure { eta_e } => PairChannelOutput::Erasure {
            p_both_arrive: eta_e * eta_e,
            conditional_state: rho.clone(),
        },
        _ => PairChannelOutput::State(apply_kraus_both(rho, &channel.kraus())),
    }
}

/// Which closed form to use for repeated depolarising memory decay.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum DepolYieldMode {
    /// The published closed form
    /// `(1−p)^{2n} − ¼(p−2)p((n−1)(1−p)^{2(n−1)} + 1)`.
    #[default]
    PaperFormula,
    /// `(1 + 3(1−p)^{2n})/4`, the exact fidelity after `n` two-sided
    /// channel applications.
    IteratedChannel,
}

/// `Ψ+` fidelity after `n` rounds of two-sided depolarising noise.
///
/// The published closed form is only stated for `n ≥ 1`; with no channel
/// applied both modes return 1.
pub fn depol_yield(p: f64, n: u32, mode: DepolYieldMode) -> f64 {
    if n == 0 {
        return 1.0;
    }
    let a = (1.0 - p) * (1.0 - p);
    match mode {
        DepolYieldMode::IteratedChannel => (1.0 + 3.0 * a.powi(n as i32)) / 4.0,
        DepolYieldMode::PaperFormula => {
            let n = n as i32;
            a.powi(n) - 0.25 * (p - 2.0) * p * ((n - 1) as f64 * a.powi(n - 1) + 1.0)
        }
    }
}

/// Closed-form `Ψ+` fidelity of the two-sided thermal channel.
pub fn thermal_yield(eta_g: f64, kappa_g: f64) -> f64 {
    0.5 * (1.0 + eta_g * eta_g) + kappa_g * (kappa_g - 1.0) * (1.0 - eta_g) * (1.0 - eta_g)
}

/// Label of one branch of the noisy Bell measurement.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SwapLabel {
    Bell(BellKind),
    /// Measurement failed (flag `|11>`).
    Failure,
}

impl fmt::Display for SwapLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SwapLabel::Bell(k) => write!(f, "{k}"),
            SwapLabel::Failure => f.write_str("fail"),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SwapBranch {
    pub probability: f64,
    pub post_state: TwoQubitState,
    pub label: SwapLabel,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SwapOutcome {
    pub branches: Vec<SwapBranch>,
    /// Branch mixture after the Pauli correction of every successful outcome.
    pub corrected_state: TwoQubitState,
    /// Isotropic visibility `(4F−1)/3` of `corrected_state`, clamped to `[0, 1]`.
    pub corrected_visibility: f64,
}

impl SwapOutcome {
    pub fn total_probability(&self) -> f64 {
        self.branches.iter().map(|b| b.probability).sum()
    }
}

/// Entanglement swapping of two pairs `ρ1` on `(A, A')` and `ρ2` on `(B', B)`.
///
/// A Bell measurement succeeding with probability `q` is applied to `(A', B')`
/// (the second qubit of `ρ1` and the first qubit of `ρ2`). On success the
/// outer qubits `(A, B)` are left in the branch state for the observed Bell
/// outcome; on failure they keep the product of their marginals.
pub fn bell_swap(
    rho1: &TwoQubitState,
    rho2: &TwoQubitState,
    q: f64,
) -> Result<SwapOutcome, QStateError> {
    check_unit("q", q)?;
    let m1 = rho1.matrix();
    let m2 = rho2.matrix();
    let mut branches = Vec::with_capacity(5);
    let mut corrected = Matrix4::<C64>::zeros();

    for kind in BellKind::ALL {
        let beta = kind.vector();
        // sigma[(a,b),(a2,b2)] = Σ conj(β[x,y]) ρ1[(a,x),(a2,x2)] ρ2[(y,b),(y2,b2)] β[x2,y2]
        let mut sigma = Matrix4::<C64>::zeros();
        for a in 0..2 {
            for b in 0..2 {
                for a2 in 0..2 {
                    for b2 in 0..2 {
                        let mut acc = c(0.0);
                        for x in 0..2 {
                            for y in 0..2 {
                                let bl = beta[2 * x + y].conj();
                                if bl.norm() == 0.0 {
                                    continue;
                                }
                                for x2 in 0..2 {
                                    for y2 in 0..2 {
                                        let br = beta[2 * x2 + y2];
                                        if br.norm() == 0.0 {
                                            continue;
                                        }
                                        acc += bl
                                            * m1[(2 * a + x, 2 * a2 + x2)]
                                            * m2[(2 * y + b, 2 * y2 + b2)]
                                            * br;
                                    }
                                }
                            }
                        }
                        sigma[(2 * a + b, 2 * a2 + b2)] = acc;
                    }
                }
            }
        }
        let weight = sigma.trace().re.max(0.0);
        let post = if weight > 0.0 {
            TwoQubitState::from_trusted(sigma / c(weight))
        } else {
            TwoQubitState::maximally_mixed()
        };
        let fixed = post.conjugate_local(&pauli(0), &kind.correction());
        corrected += fixed.matrix * c(q * weight);
        branches.push(SwapBranch {
            probability: q * weight,
            post_state: post,
            label: SwapLabel::Bell(kind),
        });
    }

    let fail_state = TwoQubitState::from_trusted(kron2(&rho1.marginal(true), &rho2.marginal(false)));
    corrected += fail_state.matrix * c(1.0 - q);
    branches.push(SwapBranch {
        probability: 1.0 - q,
        post_state: fail_state,
        label: SwapLabel::Failure,
    });

    let corrected_state = TwoQubitState::from_trusted(corrected);
    let corrected_visibility =
        visibility_from_fidelity(fidelity_psi_plus(&corrected_state)).clamp(0.0, 1.0);
    Ok(SwapOutcome {
        branches,
        corrected_state,
        corrected_visibility,
    })
}

/// Correlation-matrix witnesses of a two-qubit state.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct HorodeckiMeasures {
    /// `Σ √u_k` over the eigenvalues of `TᵀT`; teleportation-useful iff `> 1`.
    pub n: f64,
    /// Sum of the two largest eigenvalues of `TᵀT`; CHSH-violating iff `> 1`.
    pub m: f64,
}

/// Correlation matrix `t_nm = Tr[ρ σ_n ⊗ σ_m]` for the given Pauli order.
pub fn correlation_matrix(rho: &TwoQubitState, order: [usize; 3]) -> Matrix3<f64> {
    Matrix3::from_fn(|r, col| {
        let op = kron2(&pauli(order[r]), &pauli(order[col]));
        (rho.matrix * op).trace().re
    })
}

pub fn horodecki_measures(rho: &TwoQubitState) -> HorodeckiMeasures {
    horodecki_with_order(rho, [1, 2, 3])
}

pub fn horodecki_with_order(rho: &TwoQubitState, order: [usize; 3]) -> HorodeckiMeasures {
    let t = correlation_matrix(rho, order);
    let tt = t.transpose() * t;
    let eig = SymmetricEigen::new(tt);
    let mut u: Vec<f64> = eig.eigenvalues.iter().map(|&x| clamp_eigen(x)).collect();
    u.sort_by(|a, b| b.partial_cmp(a).unwrap());
    HorodeckiMeasures {
        n: u.iter().map(|x| x.sqrt()).sum(),
        m: u[0] + u[1],
    }
}

/// Wootters concurrence.
///
/// The eigenvalues of `ρ ρ̃` are obtained from the Hermitian form
/// `√ρ ρ̃ √ρ`, which shares its spectrum.
pub fn concurrence(rho: &TwoQubitState) -> f64 {
    let yy = kron2(&pauli(2), &pauli(2));
    let flipped = yy * rho.matrix.conjugate() * yy;
    let herm = (rho.matrix + rho.matrix.adjoint()) * c(0.5);
    let eig = SymmetricEigen::new(herm);
    let sqrt_vals = eig.eigenvalues.map(|x| c(clamp_eigen(x).sqrt()));
    let sqrt_rho =
        &eig.eigenvectors * Matrix4::from_diagonal(&sqrt_vals) * eig.eigenvectors.adjoint();
    let r = sqrt_rho * flipped * sqrt_rho;
    let mut l: Vec<f64> = hermitian_eigenvalues(&r)
        .iter()
        .map(|&x| clamp_eigen(x).sqrt())
        .collect();
    l.sort_by(|a, b| b.partial_cmp(a).unwrap());
    (l[0] - l[1] - l[2] - l[3]).max(0.0)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TeleportFidelity {
    pub quantum: f64,
    pub classical: f64,
}

impl TeleportFidelity {
    pub fn beats_classical(&self) -> bool {
        self.quantum > self.classical
    }
}

/// Best standard-teleportation fidelity for singlet fraction `f` in dimension `d`.
pub fn teleport_fidelity(singlet_fraction: f64, d: u32) -> Result<TeleportFidelity, QStateError> {
    check_unit("singlet_fraction", singlet_fraction)?;
    if d < 2 {
        return Err(QStateError::Dimension(d));
    }
    let d = d as f64;
    Ok(TeleportFidelity {
        quantum: (singlet_fraction * d + 1.0) / (d + 1.0),
        classical: 2.0 / (d + 1.0),
    })
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TiltedChshParams {
    alpha: f64,
    beta: f64,
}

impl TiltedChshParams {
    pub fn new(alpha: f64, beta: f64) -> Result<Self, QStateError> {
        if !(alpha >= 1.0) || !alpha.is_finite() {
            return Err(QStateError::OutOfRange {
                name: "alpha",
                value: alpha,
                range: "[1, inf)",
            });
        }
        if !(beta >= 0.0) || !beta.is_finite() {
            return Err(QStateError::OutOfRange {
                name: "beta",
                value: beta,
                range: "[0, inf)",
            });
        }
        Ok(TiltedChshParams { alpha, beta })
    }

    pub fn alpha(&self) -> f64 {
        self.alpha
    }

    pub fn beta(&self) -> f64 {
        self.beta
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ChshBounds {
    pub local: f64,
    pub quantum: f64,
}

pub fn tilted_chsh_bounds(params: TiltedChshParams) -> ChshBounds {
    let TiltedChshParams { alpha, beta } = params;
    ChshBounds {
        local: beta + 2.0 * alpha,
        quantum: 2.0 * ((1.0 + alpha * alpha) * (1.0 + beta * beta / 4.0)).sqrt(),
    }
}

/// Separability of the `d × d` isotropic state with visibility `λ`:
/// separable iff its singlet fraction `[λ(d²−1)+1]/d²` is at most `1/d`.
pub fn isotropic_separable(visibility: f64, d: u32) -> Result<bool, QStateError> {
    check_unit("visibility", visibility)?;
    if d < 2 {
        return Err(QStateError::Dimension(d));
    }
    let d = d as f64;
    let p = (visibility * (d * d - 1.0) + 1.0) / (d * d);
    Ok(p <= 1.0 / d + 1e-15)
}

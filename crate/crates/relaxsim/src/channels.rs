//! Quantum noise channels as Kraus operator sets.
//!
//! A channel maps ρ to Σ_k E_k ρ E_k†. Trace preservation requires the
//! completeness relation Σ_k E_k†E_k = I, which every constructor here
//! guarantees. Kraus representations are not unique, so channel equality is
//! decided through [`ChoiMatrix`] comparison.

use num_complex::Complex64 as C64;

use crate::error::{Error, Result};
use crate::qmatrix::{ComplexMatrix, DensityMatrix};
use crate::redfield::RelaxationParams;

/// Constructor outputs sit at ~1e-15; circuit-extracted sets at ~1e-13.
const COMPLETENESS_TOL: f64 = 1e-10;

/// Tolerance at which two Choi matrices are declared the same channel.
pub const CHOI_EQ_TOL: f64 = 1e-10;

/// A completely positive trace-preserving map in Kraus form.
#[derive(Debug, Clone)]
pub struct KrausChannel {
    dim: usize,
    operators: Vec<ComplexMatrix>,
}

impl KrausChannel {
    /// Builds a channel from a nonempty list of equal-dimension operators,
    /// verifying the completeness relation.
    pub fn new(operators: Vec<ComplexMatrix>) -> Result<Self> {
        let dim = match operators.first() {
            Some(op) => op.dim(),
            None => {
                return Err(Error::InvalidParameter(
                    "a Kraus channel needs at least one operator".into(),
                ))
            }
        };
        for op in &operators {
            if op.dim() != dim {
                return Err(Error::DimensionMismatch {
                    context: "Kraus operator list",
                    expected: dim,
                    got: op.dim(),
                });
            }
        }
        let ch = Self { dim, operators };
        let defect = ch.completeness_defect();
        if defect > COMPLETENESS_TOL {
            return Err(Error::IncompleteKraus { defect });
        }
        Ok(ch)
    }

    /// The identity channel {I}.
    pub fn identity(dim: usize) -> Self {
        Self {
            dim,
            operators: vec![ComplexMatrix::identity(dim)],
        }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn operators(&self) -> &[ComplexMatrix] {
        &self.operators
    }

    /// max |Σ E†E − I|.
    pub fn completeness_defect(&self) -> f64 {
        let mut sum = ComplexMatrix::zeros(self.dim);
        for op in &self.operators {
            let term = op
                .dagger()
                .multiply(op)
                .expect("operator dims are validated");
            sum = sum.add(&term).expect("dims match");
        }
        sum.max_abs_diff(&ComplexMatrix::identity(self.dim))
    }

    /// Σ_k E_k ρ E_k†. The output is revalidated as a density matrix.
    pub fn apply(&self, rho: &DensityMatrix) -> Result<DensityMatrix> {
        if rho.dim() != self.dim {
            return Err(Error::DimensionMismatch {
                context: "channel application",
                expected: self.dim,
                got: rho.dim(),
            });
        }
        DensityMatrix::new(self.apply_matrix(rho.mat()).hermitized())
    }

    /// Kraus sum on an arbitrary matrix (used for Choi construction, where
    /// the inputs |i⟩⟨j| are not states).
    pub fn apply_matrix(&self, m: &ComplexMatrix) -> ComplexMatrix {
        let mut out = ComplexMatrix::zeros(self.dim);
        for op in &self.operators {
            let term = op
                .multiply(m)
                .and_then(|x| x.multiply(&op.dagger()))
                .expect("operator dims are validated");
            out = out.add(&term).expect("dims match");
        }
        out
    }

    /// Channel with operators {E_k ⊗ F_m} for all pairs; models independent
    /// local noise on two subsystems.
    pub fn tensor(&self, rhs: &KrausChannel) -> KrausChannel {
        let mut operators = Vec::with_capacity(self.operators.len() * rhs.operators.len());
        for a in &self.operators {
            for b in &rhs.operators {
                operators.push(a.tensor(b));
            }
        }
        KrausChannel {
            dim: self.dim * rhs.dim,
            operators,
        }
    }

    /// Sequential application: `compose(outer, inner)` acts as
    /// outer(inner(ρ)), with operator list {O_k · I_m}.
    pub fn compose(outer: &KrausChannel, inner: &KrausChannel) -> Result<KrausChannel> {
        if outer.dim != inner.dim {
            return Err(Error::DimensionMismatch {
                context: "channel composition",
                expected: outer.dim,
                got: inner.dim,
            });
        }
        let mut operators = Vec::with_capacity(outer.operators.len() * inner.operators.len());
        for o in &outer.operators {
            for i in &inner.operators {
                operators.push(o.multiply(i).expect("dims match"));
            }
        }
        Ok(KrausChannel {
            dim: outer.dim,
            operators,
        })
    }

    /// Choi matrix Σ_ij |i⟩⟨j| ⊗ ch(|i⟩⟨j|).
    pub fn choi(&self) -> ChoiMatrix {
        let d = self.dim;
        let mut mat = ComplexMatrix::zeros(d * d);
        for i in 0..d {
            for j in 0..d {
                let mut basis = ComplexMatrix::zeros(d);
                basis[(i, j)] = C64::new(1.0, 0.0);
                let image = self.apply_matrix(&basis);
                for r in 0..d {
                    for s in 0..d {
                        mat[(i * d + r, j * d + s)] = image[(r, s)];
                    }
                }
            }
        }
        ChoiMatrix { dim: d, mat }
    }
}

/// Choi (process) matrix of a channel: the canonical representation that
/// makes comparison of different Kraus sets well-defined.
#[derive(Debug, Clone)]
pub struct ChoiMatrix {
    dim: usize,
    mat: ComplexMatrix,
}

impl ChoiMatrix {
    /// Dimension of the underlying channel (the matrix itself is dim²×dim²).
    pub fn channel_dim(&self) -> usize {
        self.dim
    }

    pub fn mat(&self) -> &ComplexMatrix {
        &self.mat
    }

    /// Largest entrywise distance; the channels are equal iff this is ≤
    /// [`CHOI_EQ_TOL`].
    pub fn distance(&self, rhs: &ChoiMatrix) -> Result<f64> {
        if self.dim != rhs.dim {
            return Err(Error::DimensionMismatch {
                context: "Choi comparison",
                expected: self.dim,
                got: rhs.dim,
            });
        }
        Ok(self.mat.max_abs_diff(&rhs.mat))
    }

    pub fn approx_eq(&self, rhs: &ChoiMatrix, tol: f64) -> bool {
        matches!(self.distance(rhs), Ok(d) if d <= tol)
    }

    /// Partial trace over the channel-output factor; equals the identity for
    /// a trace-preserving channel.
    pub fn output_trace(&self) -> ComplexMatrix {
        self.mat
            .partial_trace(&[self.dim, self.dim], &[0])
            .expect("choi dims factorize")
    }

    pub fn min_eigenvalue(&self) -> f64 {
        self.mat
            .hermitized()
            .eigenvalues_hermitian()
            .expect("hermitized matrix")
            .first()
            .copied()
            .unwrap_or(0.0)
    }
}

fn check_probability(name: &'static str, value: f64) -> Result<()> {
    if !(0.0..=1.0).contains(&value) || value.is_nan() {
        return Err(Error::InvalidProbability { name, value });
    }
    Ok(())
}

/// Generalized amplitude damping channel.
///
/// `gamma` is the decay probability and `p` the equilibrium ground-state
/// population. Operators, in order:
///
/// E₁ = √p·diag(1, √(1−γ)),   E₂ = √p·√γ|0⟩⟨1|,
/// E₃ = √(1−p)·diag(√(1−γ), 1),   E₄ = √(1−p)·√γ|1⟩⟨0|.
pub fn gad(gamma: f64, p: f64) -> Result<KrausChannel> {
    check_probability("gamma", gamma)?;
    check_probability("p", p)?;
    let sp = p.sqrt();
    let sq = (1.0 - p).sqrt();
    let sg = gamma.sqrt();
    let s1g = (1.0 - gamma).sqrt();
    let r = |x: f64| C64::new(x, 0.0);

    let e1 = ComplexMatrix::diagonal(&[r(sp), r(sp * s1g)]);
    let mut e2 = ComplexMatrix::zeros(2);
    e2[(0, 1)] = r(sp * sg);
    let e3 = ComplexMatrix::diagonal(&[r(sq * s1g), r(sq)]);
    let mut e4 = ComplexMatrix::zeros(2);
    e4[(1, 0)] = r(sq * sg);

    KrausChannel::new(vec![e1, e2, e3, e4])
}

/// Phase damping channel {√λ·I, √(1−λ)·Z}: the relative phase survives with
/// probability λ, otherwise coherences flip sign; populations never change.
pub fn pd(lambda: f64) -> Result<KrausChannel> {
    check_probability("lambda", lambda)?;
    let r = |x: f64| C64::new(x, 0.0);
    let e1 = ComplexMatrix::identity(2).scale(r(lambda.sqrt()));
    let e2 = ComplexMatrix::diagonal(&[r(1.0), r(-1.0)]).scale(r((1.0 - lambda).sqrt()));
    KrausChannel::new(vec![e1, e2])
}

/// Global phase damping on two qubits: both relative phases survive with
/// probability λ or are inverted together. Its non-identity operator is
/// proportional to diag(1,−1,−1,1) = Z⊗Z, so the Bell-type coherences ρ₀₃
/// and ρ₁₂ form a decoherence-free subspace.
pub fn gpd(lambda: f64) -> Result<KrausChannel> {
    check_probability("lambda", lambda)?;
    let r = |x: f64| C64::new(x, 0.0);
    let e0 = ComplexMatrix::diagonal(&[r(1.0), r(-1.0), r(-1.0), r(1.0)])
        .scale(r((1.0 - lambda).sqrt()));
    let e1 = ComplexMatrix::identity(4).scale(r(lambda.sqrt()));
    KrausChannel::new(vec![e0, e1])
}

/// The composite relaxation channel for the spin-3/2 (two-qubit) system:
/// GPD(λ) after GAD(γ_A, P_A) ⊗ GAD(γ_B, P_B).
///
/// The two factors commute (verified by Choi comparison in the tests), so
/// the order is a convention, fixed here as GPD ∘ (GAD ⊗ GAD).
pub fn quadrupolar_channel(params: &RelaxationParams) -> Result<KrausChannel> {
    let local = gad(params.gamma_a, params.p_a)?.tensor(&gad(params.gamma_b, params.p_b)?);
    KrausChannel::compose(&gpd(params.lambda)?, &local)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::qmatrix::PureState;

    fn c(re: f64, im: f64) -> C64 {
        C64::new(re, im)
    }

    fn plus_state() -> DensityMatrix {
        let s = PureState::new(vec![
            c(std::f64::consts::FRAC_1_SQRT_2, 0.0),
            c(std::f64::consts::FRAC_1_SQRT_2, 0.0),
        ])
        .unwrap();
        DensityMatrix::from_pure(&s)
    }

    fn bell_state() -> DensityMatrix {
        let s = PureState::new(vec![
            c(std::f64::consts::FRAC_1_SQRT_2, 0.0),
            c(0.0, 0.0),
            c(0.0, 0.0),
            c(std::f64::consts::FRAC_1_SQRT_2, 0.0),
        ])
        .unwrap();
        DensityMatrix::from_pure(&s)
    }

    #[test]
    fn identity_channel_is_identity_map() {
        let rho = plus_state();
        let out = KrausChannel::identity(2).apply(&rho).unwrap();
        assert!(out.mat().max_abs_diff(rho.mat()) < 1e-15);
    }

    #[test]
    fn full_damping_reaches_ground_state() {
        let out = gad(1.0, 1.0)
            .unwrap()
            .apply(&DensityMatrix::maximally_mixed(2))
            .unwrap();
        assert!((out.element(0, 0) - c(1.0, 0.0)).norm() < 1e-14);
        assert!(out.element(1, 1).norm() < 1e-14);
    }

    #[test]
    fn half_dephasing_kills_coherence() {
        let out = pd(0.5).unwrap().apply(&plus_state()).unwrap();
        assert!(
            out.mat()
                .max_abs_diff(DensityMatrix::maximally_mixed(2).mat())
                < 1e-14
        );
    }

    #[test]
    fn gad_with_zero_gamma_is_identity_channel() {
        for &p in &[0.0, 0.3, 1.0] {
            let ch = gad(0.0, p).unwrap();
            let d = ch
                .choi()
                .distance(&KrausChannel::identity(2).choi())
                .unwrap();
            assert!(d < 1e-14, "p = {p}: choi distance {d}");
        }
    }

    #[test]
    fn gad_zero_temperature_population_algebra() {
        // gad(gamma, 1) on diag(a, 1-a) -> diag(a + gamma(1-a), (1-gamma)(1-a)).
        let (gamma, a) = (0.37, 0.25);
        let rho =
            DensityMatrix::new(ComplexMatrix::diagonal(&[c(a, 0.0), c(1.0 - a, 0.0)])).unwrap();
        let out = gad(gamma, 1.0).unwrap().apply(&rho).unwrap();
        assert!((out.element(0, 0).re - (a + gamma * (1.0 - a))).abs() < 1e-14);
        assert!((out.element(1, 1).re - (1.0 - gamma) * (1.0 - a)).abs() < 1e-14);
    }

    #[test]
    fn gad_fixed_point_is_equilibrium_mixture() {
        // Oracle: solve the 2x2 linear fixed-point equation of the GAD
        // population map. rho00' = (1 - g(1-p)) rho00 + g p rho11 with
        // rho11 = 1 - rho00 gives rho00* = p independent of gamma.
        for &(gamma, p) in &[(0.2f64, 0.0f64), (0.5, 0.3), (0.9, 0.5), (0.4, 1.0)] {
            let g = gamma;
            let fixed_rho00 = (g * p) / (g * (1.0 - p) + g * p);
            assert!((fixed_rho00 - p).abs() < 1e-12);

            let rho =
                DensityMatrix::new(ComplexMatrix::diagonal(&[c(p, 0.0), c(1.0 - p, 0.0)])).unwrap();
            let out = gad(gamma, p).unwrap().apply(&rho).unwrap();
            assert!(out.mat().max_abs_diff(rho.mat()) < 1e-14);
        }
    }

    #[test]
    fn pd_at_one_is_identity() {
        let d = pd(1.0)
            .unwrap()
            .choi()
            .distance(&KrausChannel::identity(2).choi())
            .unwrap();
        assert!(d < 1e-14);
    }

    #[test]
    fn pd_scales_coherence_by_two_lambda_minus_one() {
        for &lambda in &[0.0, 0.25, 0.5, 0.8, 1.0] {
            let rho = plus_state();
            let out = pd(lambda).unwrap().apply(&rho).unwrap();
            let want = 0.5 * (2.0 * lambda - 1.0);
            assert!((out.element(0, 1).re - want).abs() < 1e-14);
            assert!((out.element(0, 0).re - 0.5).abs() < 1e-14);
        }
    }

    #[test]
    fn gpd_leaves_bell_coherences_untouched() {
        // rho03 and rho12 are exactly invariant for every lambda.
        let mut mat = ComplexMatrix::identity(4).scale(c(0.25, 0.0));
        mat[(0, 3)] = c(0.1, 0.05);
        mat[(3, 0)] = c(0.1, -0.05);
        mat[(1, 2)] = c(-0.07, 0.02);
        mat[(2, 1)] = c(-0.07, -0.02);
        let rho = DensityMatrix::new(mat).unwrap();
        for &lambda in &[0.0, 0.3, 0.6, 1.0] {
            let out = gpd(lambda).unwrap().apply(&rho).unwrap();
            assert!((out.element(0, 3) - rho.element(0, 3)).norm() < 1e-15);
            assert!((out.element(1, 2) - rho.element(1, 2)).norm() < 1e-15);
        }
    }

    #[test]
    fn gpd_scales_single_flip_coherences() {
        // Oracle: direct Kraus-sum evaluation says rho01, rho23, rho02, rho13
        // each pick up the factor (2*lambda - 1).
        let mut mat = ComplexMatrix::identity(4).scale(c(0.25, 0.0));
        for &(i, j, re, im) in &[
            (0usize, 1usize, 0.03, 0.01),
            (2, 3, 0.02, -0.01),
            (0, 2, 0.05, 0.02),
            (1, 3, -0.04, 0.01),
        ] {
            mat[(i, j)] = c(re, im);
            mat[(j, i)] = c(re, -im);
        }
        let rho = DensityMatrix::new(mat).unwrap();
        for &lambda in &[0.1, 0.5, 0.77] {
            let out = gpd(lambda).unwrap().apply(&rho).unwrap();
            let k = 2.0 * lambda - 1.0;
            for &(i, j) in &[(0usize, 1usize), (2, 3), (0, 2), (1, 3)] {
                let want = rho.element(i, j) * c(k, 0.0);
                assert!((out.element(i, j) - want).norm() < 1e-14);
            }
        }
    }

    #[test]
    fn gpd_fixes_bell_state_at_half_lambda() {
        let rho = bell_state();
        let out = gpd(0.5).unwrap().apply(&rho).unwrap();
        assert!(out.mat().max_abs_diff(rho.mat()) < 1e-14);
    }

    #[test]
    fn tensor_of_identities_is_joint_identity() {
        let joint = KrausChannel::identity(2).tensor(&KrausChannel::identity(2));
        let d = joint
            .choi()
            .distance(&KrausChannel::identity(4).choi())
            .unwrap();
        assert!(d < 1e-14);
    }

    #[test]
    fn tensor_of_gads_has_sixteen_complete_operators() {
        let joint = gad(0.3, 0.5).unwrap().tensor(&gad(0.6, 0.5).unwrap());
        assert_eq!(joint.operators().len(), 16);
        assert!(joint.completeness_defect() < 1e-12);
    }

    #[test]
    fn tensor_of_gads_reproduces_population_transfer_on_diagonals() {
        // Oracle: the closed-form element map with lambda = 1 (no dephasing).
        let (ga, gb) = (0.45, 0.28);
        let joint = gad(ga, 0.5).unwrap().tensor(&gad(gb, 0.5).unwrap());
        let rho = DensityMatrix::new(ComplexMatrix::diagonal(&[
            c(0.4, 0.0),
            c(0.3, 0.0),
            c(0.2, 0.0),
            c(0.1, 0.0),
        ]))
        .unwrap();
        let via_tensor = joint.apply(&rho).unwrap();
        let params = RelaxationParams::new(ga, gb, 1.0, 0.5, 0.5, 0.0).unwrap();
        let via_formula = crate::redfield::closed_form_channel_evolve(&rho, &params).unwrap();
        assert!(via_tensor.mat().max_abs_diff(via_formula.mat()) < 1e-14);
    }

    #[test]
    fn composition_with_identity_is_choi_equal() {
        let ch = gad(0.4, 0.7).unwrap();
        let composed = KrausChannel::compose(&KrausChannel::identity(2), &ch).unwrap();
        assert!(composed.choi().approx_eq(&ch.choi(), 1e-14));
    }

    #[test]
    fn pd_composition_multiplies_contrast() {
        // (2*l12 - 1) = (2*l1 - 1)(2*l2 - 1).
        let (l1, l2) = (0.8, 0.65);
        let l12 = 0.5 * (1.0 + (2.0 * l1 - 1.0) * (2.0 * l2 - 1.0));
        let composed = KrausChannel::compose(&pd(l1).unwrap(), &pd(l2).unwrap()).unwrap();
        assert!(composed.choi().approx_eq(&pd(l12).unwrap().choi(), 1e-13));
    }

    #[test]
    fn gad_composition_combines_damping() {
        // At p = 1/2: gad(g1) after gad(g2) equals gad(1 - (1-g1)(1-g2)).
        let draws = [
            (0.1, 0.2),
            (0.3, 0.7),
            (0.55, 0.15),
            (0.9, 0.05),
            (0.42, 0.42),
            (0.0, 0.6),
            (0.6, 0.0),
            (1.0, 0.3),
            (0.21, 0.88),
            (0.77, 0.33),
        ];
        for (g1, g2) in draws {
            let composed =
                KrausChannel::compose(&gad(g1, 0.5).unwrap(), &gad(g2, 0.5).unwrap()).unwrap();
            let merged = gad(1.0 - (1.0 - g1) * (1.0 - g2), 0.5).unwrap();
            let d = composed.choi().distance(&merged.choi()).unwrap();
            assert!(d < 1e-13, "g1={g1}, g2={g2}: {d}");
        }
    }

    #[test]
    fn quadrupolar_channel_is_identity_at_time_zero() {
        let params = RelaxationParams::new(0.0, 0.0, 1.0, 0.5, 0.5, 0.0).unwrap();
        let ch = quadrupolar_channel(&params).unwrap();
        assert!(ch
            .choi()
            .approx_eq(&KrausChannel::identity(4).choi(), 1e-14));
    }

    #[test]
    fn quadrupolar_channel_equilibrates_to_maximally_mixed() {
        // t -> infinity: gammas -> 1, lambda -> 1/2, P = 1/2.
        let params = RelaxationParams::new(1.0, 1.0, 0.5, 0.5, 0.5, 1.0).unwrap();
        let ch = quadrupolar_channel(&params).unwrap();
        let mixed = DensityMatrix::maximally_mixed(4);
        for rho in [
            bell_state(),
            DensityMatrix::from_pure(&PureState::basis(4, 2)),
        ] {
            let out = ch.apply(&rho).unwrap();
            assert!(out.mat().max_abs_diff(mixed.mat()) < 1e-14);
        }
    }

    #[test]
    fn choi_of_identity_is_twice_bell_projector() {
        let choi = KrausChannel::identity(2).choi();
        let bell = bell_state();
        assert!(choi.mat().max_abs_diff(&bell.mat().scale(c(2.0, 0.0))) < 1e-15);
    }

    #[test]
    fn choi_of_pd_has_rank_at_most_two() {
        let choi = pd(0.3).unwrap().choi();
        let eigs = choi.mat().hermitized().eigenvalues_hermitian().unwrap();
        let nonzero = eigs.iter().filter(|e| e.abs() > 1e-10).count();
        assert!(nonzero <= 2, "rank {nonzero}");
    }

    #[test]
    fn choi_of_gad_is_positive_on_grid() {
        for gi in 0..5 {
            for pi in 0..5 {
                let gamma = gi as f64 / 4.0;
                let p = pi as f64 / 4.0;
                let min = gad(gamma, p).unwrap().choi().min_eigenvalue();
                assert!(min > -1e-10, "gamma={gamma}, p={p}: min eig {min}");
            }
        }
    }

    #[test]
    fn choi_output_trace_is_identity() {
        let choi = gad(0.3, 0.8).unwrap().choi();
        let tr = choi.output_trace();
        assert!(tr.max_abs_diff(&ComplexMatrix::identity(2)) < 1e-12);
    }

    #[test]
    fn constructors_reject_out_of_range_parameters() {
        assert!(matches!(
            gad(-0.1, 0.5),
            Err(Error::InvalidProbability { .. })
        ));
        assert!(matches!(
            gad(0.5, 1.1),
            Err(Error::InvalidProbability { .. })
        ));
        assert!(matches!(pd(1.5), Err(Error::InvalidProbability { .. })));
        assert!(matches!(gpd(-0.2), Err(Error::InvalidProbability { .. })));
    }

    #[test]
    fn apply_rejects_dimension_mismatch() {
        let ch = pd(0.5).unwrap();
        let rho = DensityMatrix::maximally_mixed(4);
        assert!(matches!(
            ch.apply(&rho),
            Err(Error::DimensionMismatch { .. })
        ));
    }
}

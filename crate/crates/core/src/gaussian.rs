//! Two-mode Gaussian states in the symplectic (phase-space) picture.
//!
//! Quadratures are ordered `R = (X1, P1, X2, P2)` with
//! `X = (a† + a)/√2`, `P = i(a† − a)/√2`, so `[X, P] = i` and the vacuum
//! has variance 1/2 in every quadrature. A Gaussian unitary `U` is
//! represented by the real matrix `M` of its Heisenberg action
//! `U† R U = M R`; acting with `U` on a state sends the mean `d ↦ M d` and
//! the covariance `V ↦ M V Mᵀ`. For a product `U = A B` the matrices
//! multiply in the same order, `M_U = M_A M_B`.

use nalgebra::{Matrix2, Matrix4, Vector4};
use serde::Serialize;

use crate::error::{ensure_finite, Error, Result};
use crate::fmt::ser_sig;
use crate::quantum_game::{EntangleParams, StrategyProfile};

/// Quadrature variance of the vacuum (ħ = 1).
pub const VACUUM_VARIANCE: f64 = 0.5;

/// Index of each quadrature inside `R`.
pub mod idx {
    pub const X1: usize = 0;
    pub const P1: usize = 1;
    pub const X2: usize = 2;
    pub const P2: usize = 3;
}

/// Tolerance on `ν ≥ 1/2` before a value is rejected as unphysical.
const NU_SLACK: f64 = 1e-10;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub enum Mode {
    One,
    Two,
}

impl Mode {
    fn x_index(self) -> usize {
        match self {
            Mode::One => idx::X1,
            Mode::Two => idx::X2,
        }
    }
}

/// The symplectic form for the `(X1, P1, X2, P2)` ordering.
pub fn omega() -> Matrix4<f64> {
    let mut o = Matrix4::zeros();
    o[(idx::X1, idx::P1)] = 1.0;
    o[(idx::P1, idx::X1)] = -1.0;
    o[(idx::X2, idx::P2)] = 1.0;
    o[(idx::P2, idx::X2)] = -1.0;
    o
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SqueezeKind {
    SingleMode(Mode),
    TwoMode,
}

/// Heisenberg action `U† R U = M R` of a Gaussian unitary.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SymplecticTransform {
    m: Matrix4<f64>,
}

impl SymplecticTransform {
    pub fn identity() -> Self {
        Self { m: Matrix4::identity() }
    }

    /// Wraps a matrix, rejecting it unless `Mᵀ Ω M = Ω` to `tol`.
    pub fn from_matrix(m: Matrix4<f64>, tol: f64) -> Result<Self> {
        let t = Self { m };
        let err = t.symplectic_error();
        if err.is_finite() && err <= tol {
            Ok(t)
        } else {
            Err(Error::domain(format!("matrix is not symplectic (error {err:e})")))
        }
    }

    pub fn matrix(&self) -> &Matrix4<f64> {
        &self.m
    }

    /// Coefficient of quadrature `col` in the image of quadrature `row`.
    pub fn coeff(&self, row: usize, col: usize) -> f64 {
        self.m[(row, col)]
    }

    /// Largest entry of `|Mᵀ Ω M − Ω|`, relative to `max(1, |M|²)`.
    pub fn symplectic_error(&self) -> f64 {
        let o = omega();
        let diff = self.m.transpose() * o * self.m - o;
        let scale = self.m.amax().powi(2).max(1.0);
        diff.amax() / scale
    }

    /// The transform of `self · other` (apply `other` first to the state).
    pub fn then_inner(&self, other: &Self) -> Self {
        Self { m: self.m * other.m }
    }

    /// Inverse via `M⁻¹ = Ω⁻¹ Mᵀ Ω = −Ω Mᵀ Ω`, exact for symplectic `M`.
    pub fn inverse(&self) -> Self {
        let o = omega();
        Self {
            m: -(o * self.m.transpose() * o),
        }
    }
}

/// Squeezer matrices.
///
/// Single-mode `exp[γ(a² − a†²)/2]` on mode j: `X_j ↦ e^{−γ} X_j`,
/// `P_j ↦ e^{γ} P_j`. Two-mode `exp[γ(a1 a2 − a1† a2†)]`:
/// `X1 ↦ c X1 − s X2`, `P1 ↦ c P1 + s P2` and the mirror image for mode 2,
/// with `c = cosh γ`, `s = sinh γ`.
pub fn squeeze_transform(kind: SqueezeKind, gamma: f64) -> Result<SymplecticTransform> {
    ensure_finite("squeezing parameter", gamma)?;
    let mut m = Matrix4::identity();
    match kind {
        SqueezeKind::SingleMode(mode) => {
            let x = mode.x_index();
            m[(x, x)] = (-gamma).exp();
            m[(x + 1, x + 1)] = gamma.exp();
        }
        SqueezeKind::TwoMode => {
            if gamma < 0.0 {
                return Err(Error::domain(format!(
                    "two-mode squeezing parameter must be >= 0, got {gamma}"
                )));
            }
            let (c, s) = (gamma.cosh(), gamma.sinh());
            use idx::*;
            m[(X1, X1)] = c;
            m[(X1, X2)] = -s;
            m[(X2, X2)] = c;
            m[(X2, X1)] = -s;
            m[(P1, P1)] = c;
            m[(P1, P2)] = s;
            m[(P2, P2)] = c;
            m[(P2, P1)] = s;
        }
    }
    Ok(SymplecticTransform { m })
}

/// `J = S12 · S1 · S2`.
pub fn entangler_transform(params: &EntangleParams) -> Result<SymplecticTransform> {
    let s12 = squeeze_transform(SqueezeKind::TwoMode, params.gamma12())?;
    let s1 = squeeze_transform(SqueezeKind::SingleMode(Mode::One), params.gamma1())?;
    let s2 = squeeze_transform(SqueezeKind::SingleMode(Mode::Two), params.gamma2())?;
    Ok(s12.then_inner(&s1).then_inner(&s2))
}

/// Mean vector and symmetrized covariance `V_ij = ⟨{ΔR_i, ΔR_j}⟩/2`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GaussianTwoModeState {
    pub mean: Vector4<f64>,
    pub cov: Matrix4<f64>,
}

impl GaussianTwoModeState {
    pub fn vacuum() -> Self {
        Self {
            mean: Vector4::zeros(),
            cov: Matrix4::identity() * VACUUM_VARIANCE,
        }
    }

    /// The state `U|ψ⟩` for the unitary represented by `t`.
    pub fn transformed(&self, t: &SymplecticTransform) -> Self {
        let m = t.matrix();
        let cov = m * self.cov * m.transpose();
        Self {
            mean: m * self.mean,
            // re-symmetrize against rounding
            cov: (cov + cov.transpose()) * 0.5,
        }
    }

    /// Shifts the mean; displacements leave the covariance unchanged.
    pub fn displaced(&self, shift: &Vector4<f64>) -> Self {
        Self {
            mean: self.mean + shift,
            cov: self.cov,
        }
    }

    pub fn mean_x(&self, mode: Mode) -> f64 {
        self.mean[mode.x_index()]
    }

    pub fn var_x(&self, mode: Mode) -> f64 {
        let i = mode.x_index();
        self.cov[(i, i)]
    }

    pub fn block(&self, mode: Mode) -> Matrix2<f64> {
        let i = mode.x_index();
        self.cov.fixed_view::<2, 2>(i, i).into_owned()
    }

    /// The `(X1, X2)` block, i.e. the covariance of the position-space
    /// wavefunction.
    pub fn position_block(&self) -> Matrix2<f64> {
        use idx::*;
        Matrix2::new(
            self.cov[(X1, X1)],
            self.cov[(X1, X2)],
            self.cov[(X2, X1)],
            self.cov[(X2, X2)],
        )
    }

    /// Symplectic eigenvalues `(ν₋, ν₊)` of the two-mode covariance.
    pub fn symplectic_eigenvalues(&self) -> (f64, f64) {
        let a = self.cov.fixed_view::<2, 2>(0, 0).determinant();
        let b = self.cov.fixed_view::<2, 2>(2, 2).determinant();
        let c = self.cov.fixed_view::<2, 2>(0, 2).determinant();
        let delta = a + b + 2.0 * c;
        let det = self.cov.determinant();
        let disc = (delta * delta - 4.0 * det).max(0.0).sqrt();
        let minus = ((delta - disc) / 2.0).max(0.0).sqrt();
        let plus = ((delta + disc) / 2.0).sqrt();
        (minus, plus)
    }

    /// Pure Gaussian states satisfy `(2VΩ)² = −I`; returns
    /// `‖4VΩV − Ω‖` relative to `max(1, ‖V‖)²`.
    pub fn purity_residual(&self) -> f64 {
        let o = omega();
        let r = self.cov * o * self.cov * 4.0 - o;
        r.amax() / self.cov.amax().max(1.0).powi(2)
    }

    /// Checks symmetry and the uncertainty relation `V + iΩ/2 ≥ 0`.
    pub fn is_physical(&self, tol: f64) -> bool {
        let sym = (self.cov - self.cov.transpose()).amax() <= tol;
        let (nu_minus, _) = self.symplectic_eigenvalues();
        sym && nu_minus >= VACUUM_VARIANCE - NU_SLACK
    }
}

/// `J|vac⟩`.
pub fn entangled_vacuum(params: &EntangleParams) -> Result<GaussianTwoModeState> {
    Ok(GaussianTwoModeState::vacuum().transformed(&entangler_transform(params)?))
}

/// `J†(D1(x1) ⊗ D2(x2)) J |vac⟩` with `D_j(x) = exp(−i x P_j)`, which moves
/// `X_j` by `+x`.
pub fn final_state(params: &EntangleParams, x: &StrategyProfile) -> Result<GaussianTwoModeState> {
    let j = entangler_transform(params)?;
    let j_inv = j.inverse();
    let mut shift = Vector4::zeros();
    shift[idx::X1] = x.x1();
    shift[idx::X2] = x.x2();
    // J⁻¹(J m + d) = (J⁻¹J) m + J⁻¹ d; forming J⁻¹J first keeps the
    // rounding at ε‖J‖‖J⁻¹‖ instead of ε‖J‖²‖J⁻¹‖²
    Ok(GaussianTwoModeState::vacuum()
        .transformed(&j_inv.then_inner(&j))
        .displaced(&(j_inv.matrix() * shift)))
}

/// Second moments of one reduced mode.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ReducedModeStats {
    #[serde(serialize_with = "ser_sig")]
    pub var_x: f64,
    #[serde(serialize_with = "ser_sig")]
    pub var_p: f64,
    #[serde(serialize_with = "ser_sig")]
    pub cov_xp: f64,
    #[serde(serialize_with = "ser_sig")]
    pub nu: f64,
}

pub fn reduced_mode_stats(state: &GaussianTwoModeState, mode: Mode) -> ReducedModeStats {
    let b = state.block(mode);
    let (var_x, var_p, cov_xp) = (b[(0, 0)], b[(1, 1)], b[(0, 1)]);
    ReducedModeStats {
        var_x,
        var_p,
        cov_xp,
        nu: (var_x * var_p - cov_xp * cov_xp).max(0.0).sqrt(),
    }
}

/// Von Neumann entropy (nats) of a single-mode Gaussian state with
/// symplectic eigenvalue `nu`:
/// `S = (ν + ½) ln(ν + ½) − (ν − ½) ln(ν − ½)`.
pub fn vn_entropy_from_nu(nu: f64) -> Result<f64> {
    ensure_finite("nu", nu)?;
    if nu < VACUUM_VARIANCE - NU_SLACK {
        return Err(Error::domain(format!("symplectic eigenvalue must be >= 1/2, got {nu}")));
    }
    let lo = (nu - 0.5).max(0.0);
    let hi = nu + 0.5;
    let s = if nu < 1.0 {
        let tail = if lo > 0.0 { lo * lo.ln() } else { 0.0 };
        hi * hi.ln() - tail
    } else {
        // ½ ln(ν² − ¼) + ν ln((ν + ½)/(ν − ½)); no large cancelling terms
        0.5 * (hi * lo).ln() + nu * (1.0 / lo).ln_1p()
    };
    Ok(s.max(0.0))
}

/// Coefficients of the position-space wavefunction
/// `ψ(x1, x2) ∝ exp[−(α x1² + β x2² + 2 γ_c x1 x2)/2]` of `J|vac⟩`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct WavefunctionParams {
    #[serde(serialize_with = "ser_sig")]
    pub alpha: f64,
    #[serde(serialize_with = "ser_sig")]
    pub beta: f64,
    #[serde(serialize_with = "ser_sig")]
    pub gamma_c: f64,
    #[serde(serialize_with = "ser_sig")]
    pub lambda1: f64,
    #[serde(serialize_with = "ser_sig")]
    pub lambda2: f64,
    #[serde(serialize_with = "ser_sig")]
    pub lambda12: f64,
}

impl WavefunctionParams {
    /// `|ψ|²` is a Gaussian with covariance `M⁻¹/2`, `M = [[α, γ_c], [γ_c, β]]`.
    pub fn position_covariance(&self) -> Option<Matrix2<f64>> {
        Matrix2::new(self.alpha, self.gamma_c, self.gamma_c, self.beta)
            .try_inverse()
            .map(|inv| inv * 0.5)
    }

    /// `‖2 M V − I‖ / max(1, ‖M‖‖V‖)` for a position covariance `V`; zero
    /// exactly when `V = M⁻¹/2`. Avoids inverting `M`, which is
    /// ill-conditioned under strong squeezing.
    pub fn covariance_residual(&self, position_cov: &Matrix2<f64>) -> f64 {
        let m = Matrix2::new(self.alpha, self.gamma_c, self.gamma_c, self.beta);
        let scale = (m.amax() * position_cov.amax()).max(1.0);
        (m * position_cov * 2.0 - Matrix2::identity()).amax() / scale
    }

    pub fn is_normalizable(&self) -> bool {
        self.alpha > 0.0 && self.beta > 0.0 && self.alpha * self.beta - self.gamma_c * self.gamma_c > 0.0
    }
}

/// α, β, γ_c in terms of `λ = tanh γ`.
///
/// `1 ∓ tanh γ` are evaluated as `2/(1 + e^{±2γ})` and `1 − λ12²` as
/// `1/cosh² γ12` so that large squeezing does not cancel to zero.
pub fn wavefunction_params(params: &EntangleParams) -> Result<WavefunctionParams> {
    let (g1, g2, g12) = (params.gamma1(), params.gamma2(), params.gamma12());
    let one_minus = |g: f64| 2.0 / (1.0 + (2.0 * g).exp());
    let one_plus = |g: f64| 2.0 / (1.0 + (-2.0 * g).exp());
    let (l1, l2, l12) = (g1.tanh(), g2.tanh(), g12.tanh());
    let (m1, p1, m2, p2) = (one_minus(g1), one_plus(g1), one_minus(g2), one_plus(g2));
    let l12_sq = l12 * l12;
    let one_minus_l12_sq = 1.0 / g12.cosh().powi(2);
    let den = m1 * m2 * one_minus_l12_sq;
    // 1 − λ1 λ2 = (m1 p2 + p1 m2)/2
    let one_minus_l1l2 = 0.5 * (m1 * p2 + p1 * m2);
    let w = WavefunctionParams {
        alpha: (p1 * m2 + m1 * p2 * l12_sq) / den,
        beta: (m1 * p2 + p1 * m2 * l12_sq) / den,
        gamma_c: 2.0 * l12 * one_minus_l1l2 / den,
        lambda1: l1,
        lambda2: l2,
        lambda12: l12,
    };
    for (name, v) in [("alpha", w.alpha), ("beta", w.beta), ("gamma_c", w.gamma_c)] {
        if !v.is_finite() {
            return Err(Error::NonFinite(match name {
                "alpha" => "wavefunction alpha",
                "beta" => "wavefunction beta",
                _ => "wavefunction gamma_c",
            }));
        }
    }
    Ok(w)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    fn ep(g1: f64, g2: f64, g12: f64) -> EntangleParams {
        EntangleParams::new(g1, g2, g12).unwrap()
    }

    #[test]
    fn vacuum_convention() {
        let v = GaussianTwoModeState::vacuum();
        assert_eq!(v.cov, Matrix4::identity() * 0.5);
        let s = reduced_mode_stats(&v, Mode::One);
        assert_eq!((s.var_x, s.var_p, s.cov_xp, s.nu), (0.5, 0.5, 0.0, 0.5));
        assert!(v.is_physical(1e-12));
    }

    #[test]
    fn single_mode_squeezer() {
        let t = squeeze_transform(SqueezeKind::SingleMode(Mode::One), 0.0).unwrap();
        assert_eq!(*t.matrix(), Matrix4::identity());
        let t = squeeze_transform(SqueezeKind::SingleMode(Mode::One), 1.0).unwrap();
        assert_abs_diff_eq!(t.coeff(idx::X1, idx::X1), (-1.0f64).exp(), epsilon = 1e-15);
        assert_abs_diff_eq!(t.coeff(idx::P1, idx::P1), 1.0f64.exp(), epsilon = 1e-15);
        assert_eq!(t.coeff(idx::X2, idx::X2), 1.0);
        assert_eq!(t.coeff(idx::P2, idx::P2), 1.0);
        // unrestricted sign
        assert!(squeeze_transform(SqueezeKind::SingleMode(Mode::Two), -3.0).is_ok());
    }

    #[test]
    fn two_mode_squeezer() {
        let t = squeeze_transform(SqueezeKind::TwoMode, 1.0).unwrap();
        assert_abs_diff_eq!(t.coeff(idx::P1, idx::P1), 1.543081, epsilon = 1e-6);
        assert_abs_diff_eq!(t.coeff(idx::P1, idx::P2), 1.175201, epsilon = 1e-6);
        assert!(matches!(
            squeeze_transform(SqueezeKind::TwoMode, -0.1),
            Err(Error::Domain(_))
        ));
    }

    #[test]
    fn entangler_rows() {
        assert_eq!(
            *entangler_transform(&ep(0.0, 0.0, 0.0)).unwrap().matrix(),
            Matrix4::identity()
        );
        let j = entangler_transform(&ep(1.0, 0.0, 0.5)).unwrap();
        assert_abs_diff_eq!(j.coeff(idx::P1, idx::P1), 3.065205, epsilon = 1e-5);
        assert_abs_diff_eq!(j.coeff(idx::P1, idx::P2), 0.521095, epsilon = 1e-5);
        let j = entangler_transform(&ep(0.0, 0.0, 1.0)).unwrap();
        assert_abs_diff_eq!(j.coeff(idx::X1, idx::X1), 1.0f64.cosh(), epsilon = 1e-15);
        assert_abs_diff_eq!(j.coeff(idx::X1, idx::X2), -1.0f64.sinh(), epsilon = 1e-15);
    }

    #[test]
    fn squeezers_do_not_commute() {
        // the ordering J = S12 S1 S2 matters once both kinds are present
        let s12 = squeeze_transform(SqueezeKind::TwoMode, 0.5).unwrap();
        let s1 = squeeze_transform(SqueezeKind::SingleMode(Mode::One), 1.0).unwrap();
        let a = s12.then_inner(&s1);
        let b = s1.then_inner(&s12);
        assert!((a.matrix() - b.matrix()).amax() > 0.1);
    }

    #[test]
    fn inverse_is_exact() {
        let j = entangler_transform(&ep(-1.3, 0.7, 2.0)).unwrap();
        let prod = j.then_inner(&j.inverse());
        assert!((prod.matrix() - Matrix4::identity()).amax() < 1e-12);
    }

    #[test]
    fn from_matrix_rejects_non_symplectic() {
        let mut m = Matrix4::identity();
        m[(0, 0)] = 2.0;
        assert!(SymplecticTransform::from_matrix(m, 1e-12).is_err());
        let j = entangler_transform(&ep(0.4, -0.2, 1.1)).unwrap();
        assert!(SymplecticTransform::from_matrix(*j.matrix(), 1e-12).is_ok());
    }

    #[test]
    fn entangled_vacuum_variances() {
        let v = entangled_vacuum(&ep(0.0, 0.0, 0.0)).unwrap();
        assert_eq!(v.cov, Matrix4::identity() * 0.5);
        let v = entangled_vacuum(&ep(0.0, 0.0, 1.0)).unwrap();
        assert_abs_diff_eq!(v.var_x(Mode::One), 1.881098, epsilon = 1e-5);
        let v = entangled_vacuum(&ep(1.0, 0.0, 0.5)).unwrap();
        // exact value (e^{-2} cosh² 0.5 + sinh² 0.5)/2
        assert_abs_diff_eq!(v.var_x(Mode::One), 0.221812293205, epsilon = 1e-11);
        assert!(v.is_physical(1e-12));
        assert_abs_diff_eq!(v.cov.determinant(), 1.0 / 16.0, epsilon = 1e-10);
    }

    #[test]
    fn final_state_examples() {
        let s = final_state(&ep(0.3, -0.2, 0.8), &StrategyProfile::origin()).unwrap();
        assert!(s.mean.amax() < 1e-15);
        assert!((s.cov - Matrix4::identity() * 0.5).amax() < 1e-12);
        let x = StrategyProfile::new(0.097799, 0.097799).unwrap();
        let s = final_state(&ep(0.0, 0.0, 1.0), &x).unwrap();
        assert_abs_diff_eq!(s.mean_x(Mode::One), 0.265844, epsilon = 1e-5);
        assert_abs_diff_eq!(s.mean_x(Mode::Two), 0.265844, epsilon = 1e-5);
        let x = StrategyProfile::new(0.053783, 0.146199).unwrap();
        let s = final_state(&ep(1.0, 0.0, 0.5), &x).unwrap();
        assert_abs_diff_eq!(s.mean_x(Mode::One), 0.371944459356, epsilon = 1e-10);
        assert_abs_diff_eq!(s.mean_x(Mode::Two), 0.192883857303, epsilon = 1e-10);
        assert_eq!(s.mean[idx::P1], 0.0);
    }

    #[test]
    fn reduced_stats_examples() {
        let v = entangled_vacuum(&ep(0.0, 0.0, 1.0)).unwrap();
        assert_abs_diff_eq!(reduced_mode_stats(&v, Mode::One).nu, 1.881098, epsilon = 1e-5);
        let v = entangled_vacuum(&ep(1.0, 0.0, 0.5)).unwrap();
        let s = reduced_mode_stats(&v, Mode::One);
        assert_abs_diff_eq!(s.nu, 1.035438, epsilon = 1e-5);
        assert_abs_diff_eq!(s.cov_xp, 0.0, epsilon = 1e-15);
        assert_abs_diff_eq!(reduced_mode_stats(&v, Mode::Two).nu, s.nu, epsilon = 1e-12);
    }

    #[test]
    fn entropy_examples() {
        assert_eq!(vn_entropy_from_nu(0.5).unwrap(), 0.0);
        assert_abs_diff_eq!(vn_entropy_from_nu(2.0f64.cosh() / 2.0).unwrap(), 1.6198, epsilon = 1e-3);
        assert_abs_diff_eq!(vn_entropy_from_nu(1.0f64.cosh() / 2.0).unwrap(), 0.6595, epsilon = 1e-3);
        // 12-digit references from a 30-digit evaluation
        assert_abs_diff_eq!(
            vn_entropy_from_nu(2.0f64.cosh() / 2.0).unwrap(),
            1.619822092898,
            epsilon = 1e-11
        );
        assert!(vn_entropy_from_nu(0.5 - 1e-11).is_ok());
        assert!(matches!(vn_entropy_from_nu(0.49), Err(Error::Domain(_))));
    }

    #[test]
    fn entropy_continuous_across_branch() {
        let below = vn_entropy_from_nu(1.0 - 1e-12).unwrap();
        let above = vn_entropy_from_nu(1.0).unwrap();
        assert!((below - above).abs() < 1e-10);
    }

    #[test]
    fn wavefunction_examples() {
        let w = wavefunction_params(&ep(0.0, 0.0, 0.0)).unwrap();
        assert_eq!((w.alpha, w.beta, w.gamma_c), (1.0, 1.0, 0.0));
        let w = wavefunction_params(&ep(0.0, 0.0, 1.0)).unwrap();
        assert_abs_diff_eq!(w.alpha, 2.0f64.cosh(), epsilon = 1e-12);
        assert_abs_diff_eq!(w.beta, 3.762196, epsilon = 1e-5);
        assert_abs_diff_eq!(w.gamma_c, 3.626860, epsilon = 1e-5);
        let w = wavefunction_params(&ep(1.0, 0.0, 0.5)).unwrap();
        assert_abs_diff_eq!(w.lambda1, 0.761594, epsilon = 1e-6);
        assert_abs_diff_eq!(w.lambda12, 0.462117, epsilon = 1e-6);
        // 30-digit evaluation of the closed forms
        assert_abs_diff_eq!(w.alpha, 9.667023054785, epsilon = 1e-10);
        assert_abs_diff_eq!(w.beta, 3.277966955854, epsilon = 1e-10);
        assert_abs_diff_eq!(w.gamma_c, 4.929414370504, epsilon = 1e-10);
        assert!(w.is_normalizable());
        let cov = w.position_covariance().unwrap();
        let block = entangled_vacuum(&ep(1.0, 0.0, 0.5)).unwrap().position_block();
        assert!((cov - block).amax() < 1e-12);
        assert!(w.covariance_residual(&block) < 1e-12);
    }

    #[test]
    fn purity_residual_detects_mixed_states() {
        let v = entangled_vacuum(&ep(-2.0, 2.0, 3.0)).unwrap();
        assert!(v.purity_residual() < 1e-12);
        let mut mixed = GaussianTwoModeState::vacuum();
        mixed.cov[(0, 0)] = 0.8;
        assert!(mixed.purity_residual() > 0.1);
    }
}

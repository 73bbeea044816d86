//! The isentropic system in Riemann-invariant form: coefficient matrices,
//! dispersion relation, simple-wave covectors and the entropic triad.
//!
//! Unknowns are ordered `(a, u¹, u², u³)`; the time axis has index 0.

use serde::Serialize;

pub type Vec3 = [f64; 3];

pub const UNIT_TOL: f64 = 1e-12;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum FlowError {
    #[error("vector {0:?} is not a unit vector")]
    NotUnitVector(Vec3),
    #[error("e and m are parallel")]
    DegenerateDirection,
    #[error("pairwise cosine −1/κ is infeasible for κ = {0} (need κ ≥ 2)")]
    InfeasibleAngle(f64),
    #[error("invalid medium: {0}")]
    InvalidMedium(String),
    #[error("e₁m₂ − e₂m₁ vanishes")]
    DegenerateProjection,
}

pub fn dot(a: Vec3, b: Vec3) -> f64 {
    a[0] * b[0] + a[1] * b[1] + a[2] * b[2]
}

pub fn cross(a: Vec3, b: Vec3) -> Vec3 {
    [a[1] * b[2] - a[2] * b[1], a[2] * b[0] - a[0] * b[2], a[0] * b[1] - a[1] * b[0]]
}

pub fn norm(a: Vec3) -> f64 {
    dot(a, a).sqrt()
}

/// `det(a, b, c)` with the vectors as rows.
pub fn det3(a: Vec3, b: Vec3, c: Vec3) -> f64 {
    dot(a, cross(b, c))
}

pub fn scale(s: f64, a: Vec3) -> Vec3 {
    [s * a[0], s * a[1], s * a[2]]
}

pub fn add(a: Vec3, b: Vec3) -> Vec3 {
    [a[0] + b[0], a[1] + b[1], a[2] + b[2]]
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct MediumParams {
    pub gamma: f64,
    pub kappa: f64,
}

impl MediumParams {
    /// From the adiabatic exponent, `κ = 2/(γ − 1)`.
    pub fn from_gamma(gamma: f64) -> Result<Self, FlowError> {
        if !(gamma > 1.0) || !gamma.is_finite() {
            return Err(FlowError::InvalidMedium(format!("γ = {gamma} must exceed 1")));
        }
        Ok(Self { gamma, kappa: 2.0 / (gamma - 1.0) })
    }

    pub fn from_kappa(kappa: f64) -> Result<Self, FlowError> {
        if !(kappa > 0.0) || !kappa.is_finite() {
            return Err(FlowError::InvalidMedium(format!("κ = {kappa} must be positive")));
        }
        Ok(Self { gamma: 1.0 + 2.0 / kappa, kappa })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct FlowState {
    pub a: f64,
    pub u: Vec3,
}

impl FlowState {
    pub fn as_array(&self) -> [f64; 4] {
        [self.a, self.u[0], self.u[1], self.u[2]]
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum WaveKind {
    Entropic,
    Acoustic,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct WaveVector {
    pub lambda0: f64,
    pub lambda_vec: Vec3,
    pub kind: WaveKind,
    /// Unit direction `e` used in the construction.
    pub e: Vec3,
}

/// `𝒜ʲ` for `j ∈ {1, 2, 3}`: `uʲ` on the diagonal, `κ⁻¹a` in row 0 and `κa` in
/// column 0 at slot `j`.
pub fn coefficient_matrix(j: usize, state: FlowState, med: MediumParams) -> [[f64; 4]; 4] {
    assert!((1..=3).contains(&j), "axis index must be 1, 2 or 3");
    let mut m = [[0.0; 4]; 4];
    let uj = state.u[j - 1];
    for (i, row) in m.iter_mut().enumerate() {
        row[i] = uj;
    }
    m[0][j] = state.a / med.kappa;
    m[j][0] = med.kappa * state.a;
    m
}

/// Determinant of a 4×4 matrix by Gaussian elimination with partial pivoting.
pub fn det4(mut m: [[f64; 4]; 4]) -> f64 {
    let mut det = 1.0;
    for col in 0..4 {
        let pivot = (col..4).max_by(|&i, &k| m[i][col].abs().total_cmp(&m[k][col].abs())).unwrap();
        if m[pivot][col] == 0.0 {
            return 0.0;
        }
        if pivot != col {
            m.swap(pivot, col);
            det = -det;
        }
        det *= m[col][col];
        for row in col + 1..4 {
            let f = m[row][col] / m[col][col];
            for k in col..4 {
                m[row][k] -= f * m[col][k];
            }
        }
    }
    det
}

/// `det(λ₀I + Σ λⱼ𝒜ʲ)` assembled from the coefficient matrices.
pub fn characteristic_determinant(lambda0: f64, lambda_vec: Vec3, state: FlowState, med: MediumParams) -> f64 {
    let mut m = [[0.0; 4]; 4];
    for (i, row) in m.iter_mut().enumerate() {
        row[i] = lambda0;
    }
    for j in 1..=3 {
        let a = coefficient_matrix(j, state, med);
        for r in 0..4 {
            for c in 0..4 {
                m[r][c] += lambda_vec[j - 1] * a[r][c];
            }
        }
    }
    det4(m)
}

/// `[(λ₀ + u·λ)² − a²|λ|²](λ₀ + u·λ)²`.
pub fn dispersion(lambda: &WaveVector, state: FlowState) -> f64 {
    dispersion_raw(lambda.lambda0, lambda.lambda_vec, state)
}

pub fn dispersion_raw(lambda0: f64, lambda_vec: Vec3, state: FlowState) -> f64 {
    let s = lambda0 + dot(state.u, lambda_vec);
    (s * s - state.a * state.a * dot(lambda_vec, lambda_vec)) * s * s
}

fn check_unit(e: Vec3) -> Result<(), FlowError> {
    if (norm(e) - 1.0).abs() > UNIT_TOL {
        Err(FlowError::NotUnitVector(e))
    } else {
        Ok(())
    }
}

/// `(εa + u·e, −e)`.
pub fn entropic_wave_vector(e: Vec3, eps: f64, state: FlowState) -> Result<WaveVector, FlowError> {
    check_unit(e)?;
    Ok(WaveVector {
        lambda0: eps * state.a + dot(state.u, e),
        lambda_vec: scale(-1.0, e),
        kind: WaveKind::Entropic,
        e,
    })
}

/// `(det(u, e, m), −e × m)`.
pub fn acoustic_wave_vector(e: Vec3, m: Vec3, state: FlowState) -> Result<WaveVector, FlowError> {
    check_unit(e)?;
    let exm = cross(e, m);
    if norm(exm) <= UNIT_TOL * norm(m).max(1.0) {
        return Err(FlowError::DegenerateDirection);
    }
    Ok(WaveVector {
        lambda0: det3(state.u, e, m),
        lambda_vec: scale(-1.0, exm),
        kind: WaveKind::Acoustic,
        e,
    })
}

/// `λ₀t + λ·x`.
pub fn riemann_invariant(lambda: &WaveVector, t: f64, x: Vec3) -> f64 {
    lambda.lambda0 * t + dot(lambda.lambda_vec, x)
}

/// Three unit vectors with pairwise cosines `−1/κ`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct EntropicTriad {
    pub e: [Vec3; 3],
}

impl EntropicTriad {
    pub fn gram(&self) -> [[f64; 3]; 3] {
        let mut g = [[0.0; 3]; 3];
        for i in 0..3 {
            for j in 0..3 {
                g[i][j] = dot(self.e[i], self.e[j]);
            }
        }
        g
    }

    /// Rotate every vector by `angle` about `axis` (Rodrigues).
    pub fn rotated(&self, axis: Vec3, angle: f64) -> Self {
        let n = norm(axis);
        if n == 0.0 {
            return *self;
        }
        let k = scale(1.0 / n, axis);
        let (s, c) = angle.sin_cos();
        let rot = |v: Vec3| add(add(scale(c, v), scale(s, cross(k, v))), scale(dot(k, v) * (1.0 - c), k));
        Self { e: [rot(self.e[0]), rot(self.e[1]), rot(self.e[2])] }
    }
}

/// Symmetric triad about the z-axis at polar angle `θ` with `cos²θ = (κ − 2)/(3κ)`.
pub fn make_entropic_triad(med: MediumParams) -> Result<EntropicTriad, FlowError> {
    let kappa = med.kappa;
    if !(kappa >= 2.0) {
        return Err(FlowError::InfeasibleAngle(kappa));
    }
    let cos_t = ((kappa - 2.0) / (3.0 * kappa)).sqrt();
    let sin_t = (1.0 - cos_t * cos_t).sqrt();
    let mut e = [[0.0; 3]; 3];
    for (i, v) in e.iter_mut().enumerate() {
        let phi = 2.0 * std::f64::consts::PI * i as f64 / 3.0;
        *v = [sin_t * phi.cos(), sin_t * phi.sin(), cos_t];
    }
    Ok(EntropicTriad { e })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn matrix_at_rest() {
        let med = MediumParams::from_kappa(5.0).unwrap();
        let m = coefficient_matrix(1, FlowState { a: 1.0, u: [0.0; 3] }, med);
        assert_eq!(m[0][1], 0.2);
        assert_eq!(m[1][0], 5.0);
        let nonzero = m.iter().flatten().filter(|v| **v != 0.0).count();
        assert_eq!(nonzero, 2);
    }

    #[test]
    fn gamma_to_kappa() {
        assert!((MediumParams::from_gamma(1.4).unwrap().kappa - 5.0).abs() < 1e-12);
        assert!(MediumParams::from_gamma(1.0).is_err());
    }

    #[test]
    fn wave_vector_examples() {
        let st = FlowState { a: 1.0, u: [0.0; 3] };
        let w = entropic_wave_vector([1.0, 0.0, 0.0], 1.0, st).unwrap();
        assert_eq!((w.lambda0, w.lambda_vec), (1.0, [-1.0, 0.0, 0.0]));
        let w2 = entropic_wave_vector([1.0, 0.0, 0.0], -1.0, st).unwrap();
        assert_eq!(w.lambda0 - w2.lambda0, 2.0);
        let st = FlowState { a: 1.0, u: [0.0, 0.0, 3.0] };
        let s = acoustic_wave_vector([1.0, 0.0, 0.0], [0.0, 1.0, 0.0], st).unwrap();
        assert_eq!((s.lambda0, s.lambda_vec), (3.0, [0.0, 0.0, -1.0]));
        assert_eq!(dispersion(&s, st), 0.0);
        assert!(matches!(
            acoustic_wave_vector([1.0, 0.0, 0.0], [2.0, 0.0, 0.0], st),
            Err(FlowError::DegenerateDirection)
        ));
        assert!(matches!(entropic_wave_vector([1.0, 1.0, 0.0], 1.0, st), Err(FlowError::NotUnitVector(_))));
    }

    #[test]
    fn riemann_invariant_value() {
        let w = WaveVector { lambda0: 1.0, lambda_vec: [-1.0, 0.0, 0.0], kind: WaveKind::Entropic, e: [1.0, 0.0, 0.0] };
        assert_eq!(riemann_invariant(&w, 2.0, [3.0, 0.0, 0.0]), -1.0);
    }

    #[test]
    fn triad_geometry() {
        for kappa in [2.0, 3.0, 5.0, 40.0] {
            let t = make_entropic_triad(MediumParams::from_kappa(kappa).unwrap()).unwrap();
            let g = t.gram();
            for (i, row) in g.iter().enumerate() {
                for (j, v) in row.iter().enumerate() {
                    let want = if i == j { 1.0 } else { -1.0 / kappa };
                    assert!((v - want).abs() < 1e-12);
                }
            }
        }
        let planar = make_entropic_triad(MediumParams::from_kappa(2.0).unwrap()).unwrap();
        assert!(det3(planar.e[0], planar.e[1], planar.e[2]).abs() < 1e-12);
        assert!(matches!(
            make_entropic_triad(MediumParams::from_kappa(1.5).unwrap()),
            Err(FlowError::InfeasibleAngle(_))
        ));
    }

    #[test]
    fn rotation_preserves_gram() {
        let t = make_entropic_triad(MediumParams::from_kappa(5.0).unwrap()).unwrap();
        let r = t.rotated([0.3, -1.0, 0.2], 0.77);
        let (g0, g1) = (t.gram(), r.gram());
        for i in 0..3 {
            for j in 0..3 {
                assert!((g0[i][j] - g1[i][j]).abs() < 1e-14);
            }
        }
    }
}

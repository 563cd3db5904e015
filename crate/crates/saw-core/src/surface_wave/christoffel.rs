//! Plane-wave operator blocks for the coupled piezoelectric half-space.
//!
//! Axis convention: x1 is the propagation direction, x3 the outward surface
//! normal, the substrate occupies x3 < 0. Partial waves vary as
//! `exp(ik(x1 + alpha*x3))`; the mechanical displacement and the electric
//! potential are stacked into 4-vectors.

use nalgebra::Matrix3;

use crate::materials::voigt::{piezo_to_tensor, stiffness_to_tensor, Rank3, Rank4};
use crate::materials::MaterialConstants;

/// 4x4 real block; index 3 is the potential row/column.
pub type Block = [[f64; 4]; 4];

/// Precomputed, conditioning-scaled operator blocks for one propagation
/// direction on one material (already expressed in the device frame).
#[derive(Debug, Clone)]
pub struct HalfSpaceProblem {
    /// G(1,1) scaled.
    pub g11: Block,
    /// G(1,3) + G(3,1) scaled.
    pub g13s: Block,
    /// G(3,3) scaled.
    pub g33: Block,
    /// rho * d1^2: multiplies v^2 on the mechanical diagonal of the scaled Q.
    pub rho_scaled: f64,
    pub density: f64,
    /// Column scaling from scaled 4-vectors back to physical amplitudes.
    pub amp_scale: [f64; 4],
    /// Device-frame tensors kept for boundary-condition rows.
    pub c: Rank4,
    pub e: Rank3,
    pub eps: Matrix3<f64>,
    /// Slowest piezoelectrically stiffened bulk velocity along x1, m/s.
    pub bulk_ceiling: f64,
    /// Fixed row scales for the traction and electrical boundary rows.
    pub traction_row_scale: f64,
    pub electrical_row_scale: f64,
}

impl HalfSpaceProblem {
    /// Build from device-frame constants.
    pub fn new(device_mat: &MaterialConstants) -> Self {
        let c = stiffness_to_tensor(&device_mat.elastic);
        let e = piezo_to_tensor(&device_mat.piezo);
        let eps = device_mat.permittivity;

        let c_ref = device_mat
            .elastic
            .iter()
            .fold(0.0_f64, |m, v| m.max(v.abs()));
        let e_max = device_mat.piezo.iter().fold(0.0_f64, |m, v| m.max(v.abs()));
        let eps_max = eps.iter().fold(0.0_f64, |m, v| m.max(v.abs()));
        // Floor the piezo scale so zero-piezo materials stay well conditioned.
        let e_ref = e_max.max((eps_max * c_ref).sqrt());
        let d1 = 1.0 / c_ref.sqrt();
        let d4 = c_ref.sqrt() / e_ref;
        let d = [d1, d1, d1, d4];

        let g = |p: usize, q: usize| -> Block {
            let mut b = [[0.0; 4]; 4];
            for i in 0..3 {
                for k in 0..3 {
                    b[i][k] = c[i][p][k][q];
                }
                b[i][3] = e[p][i][q];
                b[3][i] = e[p][i][q];
            }
            b[3][3] = -eps[(p, q)];
            b
        };
        let scale = |b: Block| -> Block {
            let mut s = [[0.0; 4]; 4];
            for i in 0..4 {
                for j in 0..4 {
                    s[i][j] = b[i][j] * d[i] * d[j];
                }
            }
            s
        };
        let g11 = g(0, 0);
        let g13 = g(0, 2);
        let g31 = g(2, 0);
        let g33 = g(2, 2);
        let mut g13s = [[0.0; 4]; 4];
        for i in 0..4 {
            for j in 0..4 {
                g13s[i][j] = g13[i][j] + g31[i][j];
            }
        }

        let bulk_ceiling = slowest_bulk_velocity(&c, &e, &eps, device_mat.density);

        let eps0 = crate::VACUUM_PERMITTIVITY;
        let traction_row_scale = c_ref * d1;
        let electrical_row_scale = e_max * d1 + (eps_max + eps0) * d4;

        Self {
            g11: scale(g11),
            g13s: scale(g13s),
            g33: scale(g33),
            rho_scaled: device_mat.density * d1 * d1,
            density: device_mat.density,
            amp_scale: d,
            c,
            e,
            eps,
            bulk_ceiling,
            traction_row_scale,
            electrical_row_scale,
        }
    }
}

/// Slowest stiffened bulk phase velocity for propagation along x1.
///
/// Uses the piezoelectrically stiffened Christoffel matrix
/// `c_i1k1 + g_i g_k / eps_11` with `g_i = e_1i1`.
fn slowest_bulk_velocity(c: &Rank4, e: &Rank3, eps: &Matrix3<f64>, density: f64) -> f64 {
    let mut gamma = Matrix3::zeros();
    for i in 0..3 {
        for k in 0..3 {
            gamma[(i, k)] = c[i][0][k][0];
        }
    }
    let g = nalgebra::Vector3::new(e[0][0][0], e[0][1][0], e[0][2][0]);
    let e11 = eps[(0, 0)];
    if e11 > 0.0 {
        gamma += g * g.transpose() / e11;
    }
    let sym = (gamma + gamma.transpose()) * 0.5;
    let eig = nalgebra::SymmetricEigen::new(sym);
    let min_ev = eig.eigenvalues.iter().fold(f64::MAX, |m, &v| m.min(v));
    (min_ev / density).sqrt()
}

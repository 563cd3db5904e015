//! Tensor rotation into device frames defined by Euler angles.

use nalgebra::{Matrix3, Matrix6};

use super::voigt::{
    piezo_to_tensor, stiffness_to_tensor, tensor_to_piezo, tensor_to_stiffness, Rank3, Rank4,
};
use super::{MaterialConstants, Orientation};

/// Direction-cosine matrix of the device frame.
///
/// Rows are the device axes expressed in crystal coordinates, built as
/// `A = Rz(theta) * Rx(phi) * Rz(psi)` from passive rotations about the
/// crystal Z axis, the intermediate X axis, and the wafer normal. Row 1 is
/// the propagation direction, row 3 the wafer normal.
pub fn device_frame(o: &Orientation) -> Matrix3<f64> {
    let a1 = passive_z(o.psi().to_radians());
    let a2 = passive_x(o.phi().to_radians());
    let a3 = passive_z(o.theta().to_radians());
    a3 * a2 * a1
}

fn passive_z(angle: f64) -> Matrix3<f64> {
    let (s, c) = angle.sin_cos();
    Matrix3::new(c, s, 0.0, -s, c, 0.0, 0.0, 0.0, 1.0)
}

fn passive_x(angle: f64) -> Matrix3<f64> {
    let (s, c) = angle.sin_cos();
    Matrix3::new(1.0, 0.0, 0.0, 0.0, c, s, 0.0, -s, c)
}

/// Express all material tensors in the device frame of `o`.
///
/// Applies the full rank-4, rank-3 and rank-2 transformations
/// `c'_ijkl = a_ip a_jq a_kr a_ls c_pqrs` (and analogues), then re-projects
/// to Voigt form. Density, labels and the declared class are unchanged.
pub fn rotate_tensors(mat: &MaterialConstants, o: &Orientation) -> MaterialConstants {
    let a = device_frame(o);
    MaterialConstants {
        name: mat.name.clone(),
        density: mat.density,
        elastic: rotate_stiffness(&mat.elastic, &a),
        piezo: rotate_piezo_matrix(&mat.piezo, &a),
        permittivity: rotate_permittivity(&mat.permittivity, &a),
        handedness: mat.handedness,
        temperature_label: mat.temperature_label.clone(),
        symmetry_class: mat.symmetry_class.clone(),
    }
}

fn rotate_stiffness(c: &Matrix6<f64>, a: &Matrix3<f64>) -> Matrix6<f64> {
    let t = stiffness_to_tensor(c);
    let mut out: Rank4 = [[[[0.0; 3]; 3]; 3]; 3];
    for i in 0..3 {
        for j in 0..3 {
            for k in 0..3 {
                for l in 0..3 {
                    let mut acc = 0.0;
                    for p in 0..3 {
                        for q in 0..3 {
                            for r in 0..3 {
                                for s in 0..3 {
                                    acc += a[(i, p)] * a[(j, q)] * a[(k, r)] * a[(l, s)]
                                        * t[p][q][r][s];
                                }
                            }
                        }
                    }
                    out[i][j][k][l] = acc;
                }
            }
        }
    }
    tensor_to_stiffness(&out)
}

fn rotate_piezo_matrix(
    e: &nalgebra::Matrix3x6<f64>,
    a: &Matrix3<f64>,
) -> nalgebra::Matrix3x6<f64> {
    let t = piezo_to_tensor(e);
    let mut out: Rank3 = [[[0.0; 3]; 3]; 3];
    for i in 0..3 {
        for j in 0..3 {
            for k in 0..3 {
                let mut acc = 0.0;
                for p in 0..3 {
                    for q in 0..3 {
                        for r in 0..3 {
                            acc += a[(i, p)] * a[(j, q)] * a[(k, r)] * t[p][q][r];
                        }
                    }
                }
                out[i][j][k] = acc;
            }
        }
    }
    tensor_to_piezo(&out)
}

fn rotate_permittivity(eps: &Matrix3<f64>, a: &Matrix3<f64>) -> Matrix3<f64> {
    a * eps * a.transpose()
}

/// 6x6 Bond stress-transformation matrix of a direction-cosine matrix.
///
/// Satisfies `c_voigt' = M c_voigt M^T`; kept public so independent checks
/// can cross-validate the full-tensor route.
pub fn bond_matrix(a: &Matrix3<f64>) -> Matrix6<f64> {
    let g = |i: usize, j: usize| a[(i, j)];
    // Pair order matching the Voigt convention: 23, 13, 12.
    let pairs = [(1usize, 2usize), (0, 2), (0, 1)];
    let mut m = Matrix6::zeros();
    for i in 0..3 {
        for j in 0..3 {
            m[(i, j)] = g(i, j) * g(i, j);
        }
        for (b, &(k, l)) in pairs.iter().enumerate() {
            m[(i, 3 + b)] = 2.0 * g(i, k) * g(i, l);
        }
    }
    for (r, &(i, j)) in pairs.iter().enumerate() {
        for k in 0..3 {
            m[(3 + r, k)] = g(i, k) * g(j, k);
        }
        for (b, &(k, l)) in pairs.iter().enumerate() {
            m[(3 + r, 3 + b)] = g(i, k) * g(j, l) + g(i, l) * g(j, k);
        }
    }
    m
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::materials::Handedness;
    use approx::assert_relative_eq;
    use nalgebra::Matrix3x6;

    fn quartz_like() -> MaterialConstants {
        // Class-32 pattern with made-up but valid magnitudes.
        let (c11, c12, c13, c14, c33, c44) = (86.74e9, 6.99e9, 11.91e9, -17.91e9, 107.2e9, 57.94e9);
        let c66 = (c11 - c12) / 2.0;
        let elastic = Matrix6::from_row_slice(&[
            c11, c12, c13, c14, 0.0, 0.0, //
            c12, c11, c13, -c14, 0.0, 0.0, //
            c13, c13, c33, 0.0, 0.0, 0.0, //
            c14, -c14, 0.0, c44, 0.0, 0.0, //
            0.0, 0.0, 0.0, 0.0, c44, c14, //
            0.0, 0.0, 0.0, 0.0, c14, c66,
        ]);
        let (e11, e14) = (0.171, -0.0406);
        let piezo = Matrix3x6::from_row_slice(&[
            e11, -e11, 0.0, e14, 0.0, 0.0, //
            0.0, 0.0, 0.0, 0.0, -e14, -e11, //
            0.0, 0.0, 0.0, 0.0, 0.0, 0.0,
        ]);
        let eps0 = crate::VACUUM_PERMITTIVITY;
        let permittivity = Matrix3::from_diagonal(&nalgebra::Vector3::new(
            4.43 * eps0,
            4.43 * eps0,
            4.63 * eps0,
        ));
        MaterialConstants {
            name: "quartz-like".into(),
            density: 2649.0,
            elastic,
            piezo,
            permittivity,
            handedness: Handedness::Right,
            temperature_label: "293 K".into(),
            symmetry_class: "32".into(),
        }
    }

    #[test]
    fn identity_rotation_is_identity() {
        let m = quartz_like();
        let r = rotate_tensors(&m, &Orientation::new(0.0, 0.0, 0.0).unwrap());
        assert_relative_eq!(r.elastic, m.elastic, epsilon = 1e-6);
        assert_relative_eq!(r.piezo, m.piezo, epsilon = 1e-15);
        assert_relative_eq!(r.permittivity, m.permittivity, epsilon = 1e-24);
    }

    #[test]
    fn device_frame_is_orthonormal() {
        let o = Orientation::new(33.0, -51.0, 112.0).unwrap();
        let a = device_frame(&o);
        let should_be_identity = a * a.transpose();
        assert_relative_eq!(should_be_identity, Matrix3::identity(), epsilon = 1e-14);
        assert_relative_eq!(a.determinant(), 1.0, epsilon = 1e-14);
    }

    #[test]
    fn phi_90_puts_crystal_z_in_wafer_plane() {
        let a = device_frame(&Orientation::new(0.0, 90.0, 0.0).unwrap());
        // Wafer normal (row 3) orthogonal to crystal Z; Z appears along row 2.
        assert_relative_eq!(a[(2, 2)], 0.0, epsilon = 1e-15);
        assert_relative_eq!(a[(1, 2)], 1.0, epsilon = 1e-15);
        assert_relative_eq!(a[(0, 0)], 1.0, epsilon = 1e-15);
    }

    #[test]
    fn st_cut_wafer_normal() {
        // (0, -47.25, 0) is the rotated-Y-cut with normal Y tilted toward Z.
        let a = device_frame(&Orientation::new(0.0, -47.25, 0.0).unwrap());
        let expect_n = nalgebra::Vector3::new(
            0.0,
            47.25_f64.to_radians().sin(),
            47.25_f64.to_radians().cos(),
        );
        let n = a.row(2).transpose();
        assert_relative_eq!(n, expect_n, epsilon = 1e-12);
    }

    #[test]
    fn threefold_symmetry_of_class32() {
        let m = quartz_like();
        let r = rotate_tensors(&m, &Orientation::new(0.0, 0.0, 120.0).unwrap());
        let scale = m.elastic.iter().fold(0.0_f64, |s, v| s.max(v.abs()));
        for (a, b) in r.elastic.iter().zip(m.elastic.iter()) {
            assert!((a - b).abs() < 1e-9 * scale, "elastic broke 3-fold symmetry");
        }
        let escale = m.piezo.iter().fold(0.0_f64, |s, v| s.max(v.abs()));
        for (a, b) in r.piezo.iter().zip(m.piezo.iter()) {
            assert!((a - b).abs() < 1e-9 * escale, "piezo broke 3-fold symmetry");
        }
    }

    #[test]
    fn composition_matches_single_rotation() {
        let m = quartz_like();
        let step1 = rotate_tensors(&m, &Orientation::new(0.0, 37.0, 0.0).unwrap());
        // Applying theta about the new wafer normal equals the combined triple.
        let two_step = rotate_tensors(&step1, &Orientation::new(0.0, 0.0, 25.0).unwrap());
        let direct = rotate_tensors(&m, &Orientation::new(0.0, 37.0, 25.0).unwrap());
        let scale = m.elastic.iter().fold(0.0_f64, |s, v| s.max(v.abs()));
        for (a, b) in two_step.elastic.iter().zip(direct.elastic.iter()) {
            assert!((a - b).abs() < 1e-12 * scale);
        }
    }

    #[test]
    fn bond_matrix_agrees_with_full_tensor_route() {
        let m = quartz_like();
        let o = Orientation::new(12.0, -38.0, 77.0).unwrap();
        let a = device_frame(&o);
        let bond = bond_matrix(&a);
        let via_bond = bond * m.elastic * bond.transpose();
        let via_tensor = rotate_tensors(&m, &o).elastic;
        let scale = m.elastic.iter().fold(0.0_f64, |s, v| s.max(v.abs()));
        for (x, y) in via_bond.iter().zip(via_tensor.iter()) {
            assert!((x - y).abs() < 1e-10 * scale);
        }
    }

    #[test]
    fn frobenius_norm_invariance() {
        let m = quartz_like();
        let o = Orientation::new(-20.0, 63.0, 141.0).unwrap();
        let r = rotate_tensors(&m, &o);
        // Compare norms of the full tensors, not the Voigt projections.
        let norm4 = |c: &Matrix6<f64>| {
            let t = stiffness_to_tensor(c);
            let mut s = 0.0;
            for i in 0..3 {
                for j in 0..3 {
                    for k in 0..3 {
                        for l in 0..3 {
                            s += t[i][j][k][l] * t[i][j][k][l];
                        }
                    }
                }
            }
            s.sqrt()
        };
        assert_relative_eq!(norm4(&m.elastic), norm4(&r.elastic), max_relative = 1e-12);
        let norm3 = |e: &Matrix3x6<f64>| {
            let t = piezo_to_tensor(e);
            let mut s = 0.0;
            for i in 0..3 {
                for j in 0..3 {
                    for k in 0..3 {
                        s += t[i][j][k] * t[i][j][k];
                    }
                }
            }
            s.sqrt()
        };
        assert_relative_eq!(norm3(&m.piezo), norm3(&r.piezo), max_relative = 1e-12);
        assert_relative_eq!(
            m.permittivity.norm(),
            r.permittivity.norm(),
            max_relative = 1e-12
        );
    }
}

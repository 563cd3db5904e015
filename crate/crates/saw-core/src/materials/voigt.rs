//! Conversions between Voigt matrices and full index tensors.
//!
//! Voigt pair order: 1->11, 2->22, 3->33, 4->23, 5->13, 6->12. Stiffness and
//! piezoelectric stress constants carry no factor-of-two conventions in
//! either direction.

use nalgebra::{Matrix3x6, Matrix6};

pub type Rank4 = [[[[f64; 3]; 3]; 3]; 3];
pub type Rank3 = [[[f64; 3]; 3]; 3];

const VOIGT_PAIRS: [(usize, usize); 6] = [(0, 0), (1, 1), (2, 2), (1, 2), (0, 2), (0, 1)];

/// Voigt index of an (i, j) pair.
#[inline]
pub fn voigt_index(i: usize, j: usize) -> usize {
    match (i, j) {
        (0, 0) => 0,
        (1, 1) => 1,
        (2, 2) => 2,
        (1, 2) | (2, 1) => 3,
        (0, 2) | (2, 0) => 4,
        (0, 1) | (1, 0) => 5,
        _ => unreachable!("indices must be < 3"),
    }
}

pub fn stiffness_to_tensor(c: &Matrix6<f64>) -> Rank4 {
    let mut t = [[[[0.0; 3]; 3]; 3]; 3];
    for i in 0..3 {
        for j in 0..3 {
            for k in 0..3 {
                for l in 0..3 {
                    t[i][j][k][l] = c[(voigt_index(i, j), voigt_index(k, l))];
                }
            }
        }
    }
    t
}

pub fn tensor_to_stiffness(t: &Rank4) -> Matrix6<f64> {
    let mut c = Matrix6::zeros();
    for (a, &(i, j)) in VOIGT_PAIRS.iter().enumerate() {
        for (b, &(k, l)) in VOIGT_PAIRS.iter().enumerate() {
            c[(a, b)] = t[i][j][k][l];
        }
    }
    c
}

pub fn piezo_to_tensor(e: &Matrix3x6<f64>) -> Rank3 {
    let mut t = [[[0.0; 3]; 3]; 3];
    for i in 0..3 {
        for j in 0..3 {
            for k in 0..3 {
                t[i][j][k] = e[(i, voigt_index(j, k))];
            }
        }
    }
    t
}

pub fn tensor_to_piezo(t: &Rank3) -> Matrix3x6<f64> {
    let mut e = Matrix3x6::zeros();
    for i in 0..3 {
        for (b, &(j, k)) in VOIGT_PAIRS.iter().enumerate() {
            e[(i, b)] = t[i][j][k];
        }
    }
    e
}

//! Direct mutual-information evaluation on the unfiltered W-dimensional
//! receive model, projected onto the row space of `U_j`.
//!
//! Builds the signal and interference covariances straight from the block
//! channels and stacked precoders (never from `Ξ_j`, `Υ_j` or `H̄_j`), takes
//! an orthonormal basis of `U_j`'s row space via QR, and evaluates both
//! log-determinants through LU determinants.

use ria_core::{CMatrix, ExtendedSystem};

fn log2_abs_det(m: CMatrix) -> f64 {
    m.determinant().norm().log2()
}

pub fn direct_rate(system: &ExtendedSystem, j: usize) -> f64 {
    let k = system.users();
    let w = system.slots();
    let eye = CMatrix::identity(w, w);

    let desired = system.block(j, j) * system.stacked_precoder(j);
    let signal = &desired * desired.adjoint();
    let mut interference = CMatrix::zeros(w, w);
    for i in (0..k).filter(|&i| i != j) {
        let hv = system.block(j, i) * system.stacked_precoder(i);
        interference += &hv * hv.adjoint();
    }

    let q = system.user(j).filter.adjoint().qr().q();
    let project = |c: &CMatrix| q.adjoint() * c * &q;
    let with_signal = project(&(&signal + &interference + &eye));
    let without = project(&(&interference + &eye));
    (log2_abs_det(with_signal) - log2_abs_det(without)) / w as f64
}

//! Roots of monic cubics with complex coefficients.

use num_complex::Complex64 as C64;

/// Solves `z^3 + a2 z^2 + a1 z + a0 = 0`, returning all three roots.
///
/// Cardano's formula on the depressed cubic provides starting points that a
/// few Newton steps sharpen to near machine precision for well-separated
/// roots; clustered roots keep the sqrt-of-eps accuracy intrinsic to their
/// conditioning.
pub fn solve_monic_cubic(a2: C64, a1: C64, a0: C64) -> [C64; 3] {
    let third: f64 = 1.0 / 3.0;
    let shift = a2 * third;
    // depressed form w^3 + p w + q with z = w - a2/3
    let p = a1 - a2 * a2 * third;
    let q = a2 * (a2 * a2 * 2.0 / 27.0) - a2 * a1 * third + a0;

    let half_q = q * 0.5;
    let disc = (half_q * half_q + p * p * p / 27.0).sqrt();
    // pick the branch that avoids cancellation in -q/2 +- disc
    let u3 = if (-half_q + disc).norm() >= (-half_q - disc).norm() {
        -half_q + disc
    } else {
        -half_q - disc
    };

    let omega = C64::new(-0.5, 0.75f64.sqrt()); // primitive cube root of unity
    let mut roots = [C64::new(0.0, 0.0); 3];
    if u3.norm() == 0.0 {
        // p == 0 and q == 0: triple root of the depressed cubic at 0
        roots = [-shift; 3];
    } else {
        let u = u3.cbrt();
        for (k, root) in roots.iter_mut().enumerate() {
            let uk = u * omega.powu(k as u32);
            *root = uk - p / (uk * 3.0) - shift;
        }
    }

    for root in roots.iter_mut() {
        *root = polish(*root, a2, a1, a0);
    }
    roots
}

/// A few Newton iterations on the original cubic.
fn polish(mut z: C64, a2: C64, a1: C64, a0: C64) -> C64 {
    for _ in 0..6 {
        let f = ((z + a2) * z + a1) * z + a0;
        let df = (z * 3.0 + a2 * 2.0) * z + a1;
        if df.norm() == 0.0 {
            break;
        }
        let step = f / df;
        let next = z - step;
        if !next.re.is_finite() || !next.im.is_finite() {
            break;
        }
        z = next;
        if step.norm() <= 1e-15 * z.norm().max(1e-300) {
            break;
        }
    }
    z
}

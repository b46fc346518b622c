//! Cyclic Jacobi eigensolver for complex Hermitian matrices.
//!
//! Only needed for positivity checks and concurrence, on matrices up to
//! 128×128, where Jacobi's simplicity beats pulling in a LAPACK backend.

use super::{ComplexMatrix, C64};

const OFF_DIAGONAL_TOL: f64 = 1e-14;
const MAX_SWEEPS: usize = 100;

/// Eigenvalues (ascending) and eigenvectors (columns, matching order) of a
/// Hermitian matrix. The caller checks Hermiticity.
pub(crate) fn jacobi_hermitian(mat: &ComplexMatrix) -> (Vec<f64>, ComplexMatrix) {
    let n = mat.dim();
    let mut a = mat.clone();
    let mut v = ComplexMatrix::identity(n);
    let scale = mat.frobenius_norm().max(1.0);

    for _ in 0..MAX_SWEEPS {
        if off_diagonal_norm(&a) <= OFF_DIAGONAL_TOL * scale {
            break;
        }
        for p in 0..n {
            for q in (p + 1)..n {
                rotate(&mut a, &mut v, p, q);
            }
        }
    }

    let mut pairs: Vec<(f64, usize)> = (0..n).map(|i| (a[(i, i)].re, i)).collect();
    pairs.sort_by(|x, y| x.0.partial_cmp(&y.0).expect("eigenvalues are finite"));

    let eigenvalues: Vec<f64> = pairs.iter().map(|&(e, _)| e).collect();
    let vectors = ComplexMatrix::from_fn(n, |i, j| v[(i, pairs[j].1)]);
    (eigenvalues, vectors)
}

fn off_diagonal_norm(a: &ComplexMatrix) -> f64 {
    let n = a.dim();
    let mut sum = 0.0;
    for i in 0..n {
        for j in 0..n {
            if i != j {
                sum += a[(i, j)].norm_sqr();
            }
        }
    }
    sum.sqrt()
}

/// One Jacobi rotation zeroing A[p][q] (and A[q][p]) via A ← J†AJ with
///
///   J[p][p] = c, J[p][q] = s·e^{iφ}, J[q][p] = −s·e^{−iφ}, J[q][q] = c,
///
/// where φ = arg A[p][q] and (c, s) is the classic symmetric-Jacobi pair for
/// the phase-stripped 2×2 block.
fn rotate(a: &mut ComplexMatrix, v: &mut ComplexMatrix, p: usize, q: usize) {
    let apq = a[(p, q)];
    let m = apq.norm();
    if m == 0.0 {
        return;
    }
    let phase = apq / m;

    let app = a[(p, p)].re;
    let aqq = a[(q, q)].re;
    let tau = (aqq - app) / (2.0 * m);
    let t = if tau >= 0.0 {
        1.0 / (tau + (1.0 + tau * tau).sqrt())
    } else {
        1.0 / (tau - (1.0 + tau * tau).sqrt())
    };
    let c = 1.0 / (1.0 + t * t).sqrt();
    let s = t * c;

    let jpq = phase.scale(s);
    let jqp = -phase.conj().scale(s);

    let n = a.dim();

    // Columns: A ← A·J.
    for i in 0..n {
        let aip = a[(i, p)];
        let aiq = a[(i, q)];
        a[(i, p)] = aip.scale(c) + aiq * jqp;
        a[(i, q)] = aip * jpq + aiq.scale(c);
    }
    // Rows: A ← J†·A.
    for i in 0..n {
        let api = a[(p, i)];
        let aqi = a[(q, i)];
        a[(p, i)] = api.scale(c) + aqi * jqp.conj();
        a[(q, i)] = api * jpq.conj() + aqi.scale(c);
    }
    // Pin the rotated entries to exact values.
    a[(p, q)] = C64::new(0.0, 0.0);
    a[(q, p)] = C64::new(0.0, 0.0);
    a[(p, p)] = C64::new(a[(p, p)].re, 0.0);
    a[(q, q)] = C64::new(a[(q, q)].re, 0.0);

    // Eigenvector accumulation: V ← V·J.
    for i in 0..n {
        let vip = v[(i, p)];
        let viq = v[(i, q)];
        v[(i, p)] = vip.scale(c) + viq * jqp;
        v[(i, q)] = vip * jpq + viq.scale(c);
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn diagonal_matrix_is_fixed_point() {
        let m =
            ComplexMatrix::diagonal(&[C64::new(3.0, 0.0), C64::new(-1.0, 0.0), C64::new(0.5, 0.0)]);
        let (eigs, _) = jacobi_hermitian(&m);
        assert_eq!(eigs, vec![-1.0, 0.5, 3.0]);
    }

    #[test]
    fn complex_two_by_two() {
        // [[2, i], [-i, 2]] has eigenvalues 1 and 3.
        let m = ComplexMatrix::from_fn(2, |i, j| match (i, j) {
            (0, 0) | (1, 1) => C64::new(2.0, 0.0),
            (0, 1) => C64::new(0.0, 1.0),
            _ => C64::new(0.0, -1.0),
        });
        let (eigs, v) = jacobi_hermitian(&m);
        assert!((eigs[0] - 1.0).abs() < 1e-13);
        assert!((eigs[1] - 3.0).abs() < 1e-13);
        assert!(v.unitarity_defect() < 1e-13);
    }

    #[test]
    fn large_hermitian_reconstruction() {
        // Deterministic pseudo-random Hermitian matrix, dim 32.
        let n = 32;
        let mut seed = 0x2545f4914f6cdd1du64;
        let mut next = move || {
            seed ^= seed << 13;
            seed ^= seed >> 7;
            seed ^= seed << 17;
            (seed >> 11) as f64 / (1u64 << 53) as f64 - 0.5
        };
        let mut m = ComplexMatrix::zeros(n);
        for i in 0..n {
            m[(i, i)] = C64::new(next(), 0.0);
            for j in (i + 1)..n {
                let z = C64::new(next(), next());
                m[(i, j)] = z;
                m[(j, i)] = z.conj();
            }
        }
        let (eigs, v) = jacobi_hermitian(&m);
        let lam =
            ComplexMatrix::diagonal(&eigs.iter().map(|&e| C64::new(e, 0.0)).collect::<Vec<_>>());
        let rebuilt = v.multiply(&lam).unwrap().multiply(&v.dagger()).unwrap();
        assert!(m.max_abs_diff(&rebuilt) < 1e-11);
        assert!(eigs.windows(2).all(|w| w[0] <= w[1]));
    }
}

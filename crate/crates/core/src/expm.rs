//! Dense matrix exponential for small fixed-size complex matrices.
//!
//! Scaling and squaring with the degree-13 Padé approximant (θ₁₃ = 5.37),
//! and a plain Taylor sum when `‖A‖₁` is tiny.

use crate::C64;

const ZERO: C64 = C64 { re: 0.0, im: 0.0 };
const ONE: C64 = C64 { re: 1.0, im: 0.0 };

const THETA_13: f64 = 5.371_920_351_148_152;
const TAYLOR_CUTOFF: f64 = 1e-3;

const PADE_13: [f64; 14] = [
    64_764_752_532_480_000.0,
    32_382_376_266_240_000.0,
    7_771_770_303_897_600.0,
    1_187_353_796_428_800.0,
    129_060_195_264_000.0,
    10_559_470_521_600.0,
    670_442_572_800.0,
    33_522_128_640.0,
    1_323_241_920.0,
    40_840_800.0,
    960_960.0,
    16_380.0,
    182.0,
    1.0,
];

pub type Square<const N: usize> = [[C64; N]; N];

pub fn identity<const N: usize>() -> Square<N> {
    let mut m = [[ZERO; N]; N];
    for (i, row) in m.iter_mut().enumerate() {
        row[i] = ONE;
    }
    m
}

pub fn matmul<const N: usize>(a: &Square<N>, b: &Square<N>) -> Square<N> {
    let mut c = [[ZERO; N]; N];
    for i in 0..N {
        for k in 0..N {
            let aik = a[i][k];
            if aik == ZERO {
                continue;
            }
            for j in 0..N {
                c[i][j] += aik * b[k][j];
            }
        }
    }
    c
}

/// `Σ_k c_k M_k` over matrices of equal size.
fn combo<const N: usize>(terms: &[(f64, &Square<N>)]) -> Square<N> {
    let mut out = [[ZERO; N]; N];
    for (c, m) in terms {
        for i in 0..N {
            for j in 0..N {
                out[i][j] += m[i][j] * *c;
            }
        }
    }
    out
}

pub fn norm1<const N: usize>(a: &Square<N>) -> f64 {
    (0..N).map(|j| (0..N).map(|i| a[i][j].norm()).sum::<f64>()).fold(0.0, f64::max)
}

/// Solves `A X = B` in place by LU with partial pivoting. Returns `None`
/// for an exactly singular pivot.
pub fn solve<const N: usize>(mut a: Square<N>, mut b: Square<N>) -> Option<Square<N>> {
    for col in 0..N {
        let pivot = (col..N).max_by(|&x, &y| a[x][col].norm().total_cmp(&a[y][col].norm()))?;
        if a[pivot][col] == ZERO {
            return None;
        }
        a.swap(col, pivot);
        b.swap(col, pivot);
        let inv = ONE / a[col][col];
        for row in col + 1..N {
            let f = a[row][col] * inv;
            if f == ZERO {
                continue;
            }
            for j in col..N {
                let v = a[col][j];
                a[row][j] -= f * v;
            }
            for j in 0..N {
                let v = b[col][j];
                b[row][j] -= f * v;
            }
        }
    }
    for col in (0..N).rev() {
        let inv = ONE / a[col][col];
        for j in 0..N {
            b[col][j] *= inv;
        }
        for row in 0..col {
            let f = a[row][col];
            if f == ZERO {
                continue;
            }
            for j in 0..N {
                let v = b[col][j];
                b[row][j] -= f * v;
            }
        }
    }
    Some(b)
}

/// `e^{A}`.
pub fn expm<const N: usize>(a: &Square<N>) -> Square<N> {
    let nrm = norm1(a);
    if nrm == 0.0 {
        return identity();
    }
    if nrm < TAYLOR_CUTOFF {
        return taylor(a);
    }
    let s = if nrm > THETA_13 { libm::ceil(libm::log2(nrm / THETA_13)) as i32 } else { 0 };
    let scale = libm::pow(2.0, -(s as f64));
    let mut x = *a;
    for row in x.iter_mut() {
        for z in row.iter_mut() {
            *z *= scale;
        }
    }
    let b = &PADE_13;
    let id = identity::<N>();
    let a2 = matmul(&x, &x);
    let a4 = matmul(&a2, &a2);
    let a6 = matmul(&a4, &a2);
    let inner_u = combo(&[(b[13], &a6), (b[11], &a4), (b[9], &a2)]);
    let u_poly = combo(&[(1.0, &matmul(&a6, &inner_u)), (b[7], &a6), (b[5], &a4), (b[3], &a2), (b[1], &id)]);
    let u = matmul(&x, &u_poly);
    let inner_v = combo(&[(b[12], &a6), (b[10], &a4), (b[8], &a2)]);
    let v = combo(&[(1.0, &matmul(&a6, &inner_v)), (b[6], &a6), (b[4], &a4), (b[2], &a2), (b[0], &id)]);
    let p = combo(&[(1.0, &v), (1.0, &u)]);
    let q = combo(&[(1.0, &v), (-1.0, &u)]);
    let mut r = solve(q, p).expect("Padé denominator is nonsingular after scaling");
    for _ in 0..s {
        r = matmul(&r, &r);
    }
    r
}

fn taylor<const N: usize>(a: &Square<N>) -> Square<N> {
    let mut term = identity::<N>();
    let mut acc = identity::<N>();
    for k in 1..12 {
        term = matmul(&term, a);
        let inv = 1.0 / k as f64;
        for row in term.iter_mut() {
            for z in row.iter_mut() {
                *z *= inv;
            }
        }
        for i in 0..N {
            for j in 0..N {
                acc[i][j] += term[i][j];
            }
        }
    }
    acc
}

#[cfg(test)]
mod tests {
    use super::*;

    fn diff<const N: usize>(a: &Square<N>, b: &Square<N>) -> f64 {
        let mut m = 0.0f64;
        for i in 0..N {
            for j in 0..N {
                m = m.max((a[i][j] - b[i][j]).norm());
            }
        }
        m
    }

    #[test]
    fn diagonal() {
        let mut a = [[ZERO; 3]; 3];
        a[0][0] = C64::new(-2.0, 1.0);
        a[1][1] = C64::new(0.5, 0.0);
        a[2][2] = C64::new(-30.0, 0.0);
        let e = expm(&a);
        let mut want = [[ZERO; 3]; 3];
        for i in 0..3 {
            want[i][i] = a[i][i].exp();
        }
        assert!(diff(&e, &want) < 1e-14);
    }

    #[test]
    fn nilpotent_jordan() {
        // [[0, 1], [0, 0]] → [[1, 1], [0, 1]]; scaled by 100
        let mut a = [[ZERO; 2]; 2];
        a[0][1] = C64::new(100.0, 0.0);
        let e = expm(&a);
        assert!((e[0][1] - C64::new(100.0, 0.0)).norm() < 1e-11);
        assert!((e[0][0] - ONE).norm() < 1e-13);
    }

    #[test]
    fn rotation() {
        let mut a = [[ZERO; 2]; 2];
        a[0][1] = C64::new(-3.0, 0.0);
        a[1][0] = C64::new(3.0, 0.0);
        let e = expm(&a);
        assert!((e[0][0].re - libm::cos(3.0)).abs() < 1e-14);
        assert!((e[1][0].re - libm::sin(3.0)).abs() < 1e-14);
    }

    #[test]
    fn tiny_norm_uses_taylor() {
        let mut a = [[ZERO; 2]; 2];
        a[0][1] = C64::new(1e-5, 0.0);
        a[1][1] = C64::new(-1e-5, 0.0);
        let e = expm(&a);
        assert!((e[1][1] - C64::new(libm::exp(-1e-5), 0.0)).norm() < 1e-18);
    }

    #[test]
    fn solve_recovers_inverse() {
        let a = [
            [C64::new(2.0, 1.0), C64::new(0.0, 1.0), C64::new(1.0, 0.0)],
            [C64::new(1.0, 0.0), C64::new(3.0, 0.0), C64::new(0.0, -1.0)],
            [C64::new(0.0, 0.0), C64::new(1.0, 1.0), C64::new(4.0, 0.0)],
        ];
        let x = solve(a, identity()).unwrap();
        assert!(diff(&matmul(&a, &x), &identity()) < 1e-14);
    }
}

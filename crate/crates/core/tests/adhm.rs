mod common;

use std::collections::BTreeMap;

use num_traits::Zero;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use wallx::adhm::{
    self, critical_residuals, index_set, is_reduced, is_semistable, potential, AdhmPoint, Matrix,
    Side,
};
use wallx::rational::{frac, int, Q};

fn random_q(rng: &mut ChaCha8Rng) -> Q {
    frac(rng.gen_range(-4..=4), rng.gen_range(1..=3))
}

fn random_matrix<T: adhm::Scalar>(d: usize, mut f: impl FnMut() -> T) -> Matrix<T> {
    Matrix::from_rows((0..d).map(|_| (0..d).map(|_| f()).collect()).collect()).unwrap()
}

fn random_point<T: adhm::Scalar>(d: usize, m: usize, mut f: impl FnMut() -> T) -> AdhmPoint<T> {
    let mut vec = |n: usize| (0..n).map(|_| f()).collect::<Vec<T>>();
    let u = vec![vec(d), vec(d)];
    let v = vec![vec(d)];
    let mut f2 = || vec(1).pop().unwrap();
    AdhmPoint {
        u,
        v,
        a: random_matrix(d, &mut f2),
        b: random_matrix(d, &mut f2),
        c: random_matrix(d, &mut f2),
        alpha: index_set(m).into_iter().map(|k| (k, f2())).collect(),
    }
}

/// Every scalar entry of a point, with the matching symbolic partial derivative.
fn flat_gradient(p: &AdhmPoint<f64>, m: usize) -> Vec<f64> {
    let r = critical_residuals(p, m).unwrap();
    let t = |x: &Matrix<f64>| x.transpose().data;
    let mut out = Vec::new();
    out.extend(r.u1.data.iter());
    out.extend(r.u2.data.iter());
    out.extend(r.v.data.iter());
    out.extend(t(&r.a));
    out.extend(t(&r.b));
    out.extend(t(&r.c));
    let by_key: BTreeMap<(usize, usize), f64> = r.alpha.into_iter().collect();
    out.extend(p.alpha.keys().map(|k| by_key[k]));
    out
}

fn entry(p: &mut AdhmPoint<f64>, k: usize) -> &mut f64 {
    let d = p.d();
    let mut k = k;
    for vecs in [0usize, 1, 2] {
        if k < d {
            return match vecs {
                0 => &mut p.u[0][k],
                1 => &mut p.u[1][k],
                _ => &mut p.v[0][k],
            };
        }
        k -= d;
    }
    for mat in [&mut p.a, &mut p.b, &mut p.c] {
        if k < d * d {
            return &mut mat.data[k];
        }
        k -= d * d;
    }
    p.alpha.values_mut().nth(k).unwrap()
}

#[test]
fn gradient_matches_finite_differences() {
    let mut rng = ChaCha8Rng::seed_from_u64(21);
    let h = 1e-6;
    for case in 0..20 {
        let d = 1 + case % 3;
        let m = 1 + case % 2;
        let p = random_point(d, m, || rng.gen_range(-1.0..1.0));
        let grad = flat_gradient(&p, m);
        for (k, g) in grad.iter().enumerate() {
            let mut plus = p.clone();
            *entry(&mut plus, k) += h;
            let mut minus = p.clone();
            *entry(&mut minus, k) -= h;
            let fd = (potential(&plus, m).unwrap() - potential(&minus, m).unwrap()) / (2.0 * h);
            assert!(
                (fd - g).abs() <= 1e-6 * g.abs().max(1.0),
                "case {case} entry {k}: {fd} vs {g}"
            );
        }
    }
}

#[test]
fn c_block_is_the_adhm_relation() {
    let mut rng = ChaCha8Rng::seed_from_u64(22);
    for d in 1..=3 {
        let p = random_point(d, 2, || random_q(&mut rng));
        let r = critical_residuals(&p, 2).unwrap();
        let u1v = Matrix::column(&p.u[0]).mul(&Matrix::row(&p.v[0]));
        let expected = u1v.add(&p.a.mul(&p.b)).sub(&p.b.mul(&p.a));
        assert_eq!(r.c, expected);
    }
}

fn elementary(d: usize, i: usize, j: usize, t: Q) -> Matrix<Q> {
    let mut e = Matrix::identity(d);
    *e.get_mut(i, j) = t;
    e
}

#[test]
fn potential_is_gauge_invariant() {
    let mut rng = ChaCha8Rng::seed_from_u64(23);
    for case in 0..100 {
        let d = 1 + case % 3;
        let m = 1 + case % 3;
        let p = random_point(d, m, || random_q(&mut rng));
        let (mut g, mut g_inv) = (Matrix::identity(d), Matrix::identity(d));
        for _ in 0..4 {
            let (i, j) = (rng.gen_range(0..d), rng.gen_range(0..d));
            let t = random_q(&mut rng);
            let (e, e_inv) = if i == j {
                let s = if t.is_zero() { int(2) } else { t };
                (
                    elementary(d, i, i, s.clone()),
                    elementary(d, i, i, int(1) / s),
                )
            } else {
                (elementary(d, i, j, t.clone()), elementary(d, i, j, -t))
            };
            g = e.mul(&g);
            g_inv = g_inv.mul(&e_inv);
        }
        assert_eq!(g.mul(&g_inv), Matrix::identity(d));
        let conj = |x: &Matrix<Q>| g.mul(x).mul(&g_inv);
        let moved = AdhmPoint {
            u: p.u.iter().map(|u| g.mul(&Matrix::column(u)).data).collect(),
            v: p.v
                .iter()
                .map(|v| Matrix::row(v).mul(&g_inv).data)
                .collect(),
            a: conj(&p.a),
            b: conj(&p.b),
            c: conj(&p.c),
            alpha: p.alpha.clone(),
        };
        assert_eq!(potential(&moved, m).unwrap(), potential(&p, m).unwrap());
        let r = critical_residuals(&p, m).unwrap();
        let rm = critical_residuals(&moved, m).unwrap();
        assert_eq!(rm.c, conj(&r.c));
        assert_eq!(rm.alpha, r.alpha);
    }
}

#[test]
fn rank_one_stability_is_nonvanishing_framing() {
    let mut rng = ChaCha8Rng::seed_from_u64(24);
    for _ in 0..50 {
        let mut p = random_point(1, 1, || random_q(&mut rng));
        if rng.gen_bool(0.5) {
            p.u = vec![vec![Q::zero()], vec![Q::zero()]];
        }
        if rng.gen_bool(0.3) {
            p.u[rng.gen_range(0..2)] = vec![Q::zero()];
        }
        let nonzero = p.u.iter().any(|u| !u[0].is_zero());
        assert_eq!(is_semistable(&p, Side::Dt).unwrap().semistable, nonzero);
        assert_eq!(
            is_semistable(&p, Side::Pt).unwrap().semistable,
            !p.v[0][0].is_zero()
        );
    }
}

#[test]
fn unstable_points_expose_an_invariant_subspace() {
    let mut rng = ChaCha8Rng::seed_from_u64(25);
    for _ in 0..100 {
        let d = rng.gen_range(2..=3);
        let mut p = random_point(d, 1, || {
            if rng.gen_bool(0.6) {
                Q::zero()
            } else {
                random_q(&mut rng)
            }
        });
        p.u[1] = vec![Q::zero(); d];
        let s = is_semistable(&p, Side::Dt).unwrap();
        if s.semistable {
            // a stable framing stays stable when another vector is added
            p.u[1] = (0..d).map(|_| random_q(&mut rng)).collect();
            assert!(is_semistable(&p, Side::Dt).unwrap().semistable);
            continue;
        }
        let basis = s.invariant_subspace;
        assert!(basis.len() < d);
        let rank = |vs: &[Vec<Q>]| {
            let mut rows = vs.to_vec();
            let mut r = 0;
            for c in 0..d {
                let Some(k) = (r..rows.len()).find(|&k| !rows[k][c].is_zero()) else {
                    continue;
                };
                rows.swap(r, k);
                for k in 0..rows.len() {
                    if k != r && !rows[k][c].is_zero() {
                        let f = &rows[k][c] / &rows[r][c];
                        let pivot = rows[r].clone();
                        for (x, y) in rows[k].iter_mut().zip(&pivot) {
                            *x -= &f * y;
                        }
                    }
                }
                r += 1;
            }
            r
        };
        let mut with_u = basis.clone();
        with_u.push(p.u[0].clone());
        assert_eq!(rank(&with_u), basis.len());
        for x in &basis {
            for op in [&p.a, &p.b, &p.c] {
                let mut with_image = basis.clone();
                with_image.push(op.mul(&Matrix::column(x)).data);
                assert_eq!(rank(&with_image), basis.len());
            }
        }
    }
}

fn random_alpha(rng: &mut ChaCha8Rng, m: usize) -> BTreeMap<(usize, usize), Q> {
    let mut out = BTreeMap::new();
    for k in index_set(m) {
        let c = frac(rng.gen_range(-3..=3), rng.gen_range(1..=2));
        if rng.gen_bool(0.6) && !c.is_zero() {
            out.insert(k, c);
        }
    }
    out
}

#[test]
fn reducedness_matches_gcd_oracle() {
    let mut rng = ChaCha8Rng::seed_from_u64(26);
    for _ in 0..200 {
        let m = rng.gen_range(1..=3);
        let alpha = random_alpha(&mut rng, m);
        assert_eq!(
            is_reduced(&alpha, m),
            common::prs_squarefree(&alpha),
            "{alpha:?}"
        );
    }
}

#[test]
fn squares_are_not_reduced() {
    let mut rng = ChaCha8Rng::seed_from_u64(27);
    let mut checked = 0;
    while checked < 40 {
        // f = g^2 h with g(0) = h(0) = 1
        let mut g = random_alpha(&mut rng, 1);
        g.insert((0, 0), int(1));
        let mut h = random_alpha(&mut rng, 1);
        h.insert((0, 0), int(1));
        let mut f = common::square_times(&g, &h);
        if g.len() == 1 {
            continue;
        }
        assert_eq!(f.remove(&(0, 0)), Some(int(1)));
        assert!(!is_reduced(&f, 3), "{f:?}");
        assert!(!common::prs_squarefree(&f));
        checked += 1;
    }
}

use lierin_core::algebra::{AModule, FiniteAlgebra};
use lierin_core::algebroid::{invariants, ExtensionTriple, LieRinehart, Representation};
use lierin_core::ce::{ce_cohomology, ce_complex};
use lierin_core::enveloping::{RinehartComplex, TruncatedEnveloping};
use lierin_core::hs::{check_e2, hs_pages};
use lierin_core::linalg::{Field, Matrix, Scalar};
use proptest::prelude::*;

type Constants = Vec<Vec<Vec<i64>>>;

fn lie(n: usize, entries: &[(usize, usize, usize, i64)]) -> Constants {
    let mut c = vec![vec![vec![0; n]; n]; n];
    for &(i, j, k, v) in entries {
        c[i][j][k] = v;
        c[j][i][k] = -v;
    }
    c
}

fn examples() -> Vec<(&'static str, Constants)> {
    vec![
        ("abelian2", lie(2, &[])),
        ("aff1", lie(2, &[(0, 1, 0, 1)])),
        ("h3", lie(3, &[(0, 1, 2, 1)])),
        ("sl2", lie(3, &[(0, 1, 2, 1), (2, 0, 0, 2), (2, 1, 1, -2)])),
        ("aff1+aff1", lie(4, &[(0, 1, 0, 1), (2, 3, 2, 1)])),
        ("sl2+k", lie(4, &[(0, 1, 2, 1), (2, 0, 0, 2), (2, 1, 1, -2)])),
    ]
}

fn scalars(f: Field, c: &Constants) -> Vec<Vec<Vec<Scalar>>> {
    c.iter().map(|r| r.iter().map(|v| v.iter().map(|&x| f.from_i64(x)).collect()).collect()).collect()
}

fn trivial_module(f: Field, l: &LieRinehart, d: usize) -> Representation {
    let alg = FiniteAlgebra::ground(f);
    let module = AModule::new(&alg, d, vec![Matrix::identity(f, d)]).unwrap();
    Representation::new(l, module, vec![Matrix::zeros(f, d, d); l.rank()]).unwrap()
}

// Brute-force CE cohomology over F_p with coefficients in the trivial
// module or the adjoint module. Cochains are indexed by bitmasks.
fn naive_dims(c: &Constants, p: i64, adjoint: bool) -> Vec<usize> {
    let n = c.len();
    let d = if adjoint { n } else { 1 };
    let md = |x: i64| x.rem_euclid(p);
    let rho = |i: usize, row: usize, col: usize| -> i64 {
        if adjoint {
            c[i][col][row]
        } else {
            0
        }
    };
    let subsets = |k: usize| -> Vec<u32> { (0u32..1 << n).filter(|s| s.count_ones() as usize == k).collect() };
    let bits = |s: u32| -> Vec<usize> { (0..n).filter(|&i| s >> i & 1 == 1).collect() };
    let mut ranks = vec![0usize; n + 2];
    for k in 0..n {
        let src = subsets(k);
        let dst = subsets(k + 1);
        let mut m = vec![vec![0i64; src.len() * d]; dst.len() * d];
        for (ri, &t) in dst.iter().enumerate() {
            let xs = bits(t);
            for i in 0..xs.len() {
                let rest = t & !(1 << xs[i]);
                let ci = src.iter().position(|&s| s == rest).unwrap();
                let sign = if i % 2 == 0 { 1 } else { -1 };
                for a in 0..d {
                    for b in 0..d {
                        m[ri * d + a][ci * d + b] += sign * rho(xs[i], a, b);
                    }
                }
            }
            for i in 0..xs.len() {
                for j in i + 1..xs.len() {
                    let rest = t & !(1 << xs[i]) & !(1 << xs[j]);
                    let sign = if (i + j) % 2 == 0 { 1 } else { -1 };
                    for (kk, &coef) in c[xs[i]][xs[j]].iter().enumerate() {
                        if coef == 0 || rest >> kk & 1 == 1 {
                            continue;
                        }
                        // move s_kk from the front to its sorted place
                        let before = (rest & ((1 << kk) - 1)).count_ones();
                        let s2 = if before % 2 == 0 { sign } else { -sign };
                        let ci = src.iter().position(|&s| s == rest | 1 << kk).unwrap();
                        for a in 0..d {
                            m[ri * d + a][ci * d + a] += s2 * coef;
                        }
                    }
                }
            }
        }
        ranks[k + 1] = rank_mod(m, p, &md);
    }
    (0..=n)
        .map(|k| {
            let dim = subsets(k).len() * d;
            dim - ranks[k + 1] - ranks[k]
        })
        .collect()
}

fn rank_mod(mut m: Vec<Vec<i64>>, p: i64, md: &dyn Fn(i64) -> i64) -> usize {
    let pow = |mut b: i64, mut e: i64| {
        let mut r = 1;
        b = md(b);
        while e > 0 {
            if e & 1 == 1 {
                r = r * b % p;
            }
            b = b * b % p;
            e >>= 1;
        }
        r
    };
    let rows = m.len();
    let cols = if rows == 0 { 0 } else { m[0].len() };
    for r in m.iter_mut() {
        for x in r.iter_mut() {
            *x = md(*x);
        }
    }
    let mut rank = 0;
    for col in 0..cols {
        let Some(piv) = (rank..rows).find(|&r| m[r][col] != 0) else { continue };
        m.swap(rank, piv);
        let inv = pow(m[rank][col], p - 2);
        for r in 0..rows {
            if r != rank && m[r][col] != 0 {
                let factor = m[r][col] * inv % p;
                for c in 0..cols {
                    m[r][c] = md(m[r][c] - factor * m[rank][c]);
                }
            }
        }
        rank += 1;
    }
    rank
}

// Elementary row operations applied to the identity: always invertible.
fn change_of_basis(f: Field, n: usize, ops: &[(usize, usize, i64)]) -> Vec<Vec<Scalar>> {
    let mut t = vec![vec![0i64; n]; n];
    for (i, row) in t.iter_mut().enumerate() {
        row[i] = 1;
    }
    for &(i, j, c) in ops {
        let (i, j) = (i % n, j % n);
        if i != j {
            let src = t[j].clone();
            for (x, y) in t[i].iter_mut().zip(src) {
                *x += c * y;
            }
        }
    }
    t.iter().map(|r| r.iter().map(|&x| f.from_i64(x)).collect()).collect()
}

fn ops() -> impl Strategy<Value = Vec<(usize, usize, i64)>> {
    prop::collection::vec((0usize..4, 0usize..4, -3i64..=3), 0..6)
}

#[test]
fn naive_oracle_on_known_values() {
    assert_eq!(naive_dims(&lie(3, &[(0, 1, 2, 1)]), 101, false), [1, 2, 2, 1]);
    assert_eq!(naive_dims(&lie(2, &[(0, 1, 0, 1)]), 101, false), [1, 1, 0]);
    assert_eq!(naive_dims(&lie(3, &[(0, 1, 2, 1), (2, 0, 0, 2), (2, 1, 1, -2)]), 101, true), [0, 0, 0, 0]);
}

#[test]
fn library_matches_naive_oracle() {
    for p in [2u64, 3, 5, 7, 101] {
        let f = Field::prime(p).unwrap();
        for (name, c) in examples() {
            let l = LieRinehart::lie_algebra(f, scalars(f, &c)).unwrap();
            let triv = ce_cohomology(&l, &trivial_module(f, &l, 1)).unwrap();
            assert_eq!(triv, naive_dims(&c, p as i64, false), "{name} over F_{p}");
            let adj = ce_cohomology(&l, &Representation::adjoint(&l)).unwrap();
            assert_eq!(adj, naive_dims(&c, p as i64, true), "{name} adjoint over F_{p}");
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn rebased_cohomology_matches_oracle(which in 0usize..6, ops in ops(), pi in 0usize..4) {
        let p = [2u64, 3, 5, 101][pi];
        let f = Field::prime(p).unwrap();
        let (_, c) = examples().swap_remove(which);
        let l = LieRinehart::lie_algebra(f, scalars(f, &c)).unwrap();
        let (l2, _) = l.rebase(&change_of_basis(f, c.len(), &ops)).unwrap();
        prop_assert!(l2.validate().is_empty());
        prop_assert_eq!(ce_cohomology(&l2, &trivial_module(f, &l2, 1)).unwrap(), naive_dims(&c, p as i64, false));
        prop_assert_eq!(ce_cohomology(&l2, &Representation::adjoint(&l2)).unwrap(), naive_dims(&c, p as i64, true));
    }

    #[test]
    fn square_zero_and_euler_over_q(which in 0usize..6, ops in ops(), d in 1usize..3) {
        let f = Field::Rational;
        let (_, c) = examples().swap_remove(which);
        let l = LieRinehart::lie_algebra(f, scalars(f, &c)).unwrap();
        let (l2, _) = l.rebase(&change_of_basis(f, c.len(), &ops)).unwrap();
        for r in [trivial_module(f, &l2, d), Representation::adjoint(&l2)] {
            let cx = ce_complex(&l2, &r).unwrap();
            let betti = cx.betti().unwrap();
            let euler: i64 = betti.iter().enumerate().map(|(i, &b)| if i % 2 == 0 { b as i64 } else { -(b as i64) }).sum();
            prop_assert_eq!(euler, cx.euler_characteristic());
            prop_assert_eq!(invariants(&l2, &r), cx.cocycles(0));
        }
        let orig = ce_cohomology(&l, &Representation::adjoint(&l)).unwrap();
        prop_assert_eq!(ce_cohomology(&l2, &Representation::adjoint(&l2)).unwrap(), orig);
    }

    #[test]
    fn pbw_count_and_resolution(which in 0usize..6, ops in ops()) {
        let f = Field::Rational;
        let (_, c) = examples().swap_remove(which);
        let n = c.len();
        let l = LieRinehart::lie_algebra(f, scalars(f, &c)).unwrap();
        let (l2, _) = l.rebase(&change_of_basis(f, n, &ops)).unwrap();
        let u = TruncatedEnveloping::new(&l2, 2).unwrap();
        // monomials of degree ≤ 2 in n commuting variables
        prop_assert_eq!(u.dim(), 1 + n + n * (n + 1) / 2);
        prop_assert!(u.check_relations().is_empty());
        prop_assert!(RinehartComplex::new(&u).exactness().is_exact());
    }

    #[test]
    fn hs_independent_of_splitting(shift in -4i64..=4, central in any::<bool>()) {
        let f = Field::Rational;
        let (c, k) = if central {
            (lie(3, &[(0, 1, 2, 1)]), 2usize)
        } else {
            (lie(2, &[(0, 1, 0, 1)]), 0usize)
        };
        let n = c.len();
        let l = LieRinehart::lie_algebra(f, scalars(f, &c)).unwrap();
        let sigma: Vec<Vec<Scalar>> = (0..n)
            .filter(|&i| i != k)
            .map(|i| (0..n).map(|j| f.from_i64(if j == i { 1 } else if j == k { shift } else { 0 })).collect())
            .collect();
        let r = trivial_module(f, &l, 1);
        let plain = ExtensionTriple::from_ideal(&l, &[k], None).unwrap();
        let moved = ExtensionTriple::from_ideal(&l, &[k], Some(sigma)).unwrap();
        prop_assert!(moved.validate().is_empty());
        let a = hs_pages(&plain, &r, 4).unwrap();
        let b = hs_pages(&moved, &r, 4).unwrap();
        prop_assert!(b.converges());
        prop_assert_eq!(a.sequence.infinity_totals(), b.sequence.infinity_totals());
        prop_assert_eq!(a.sequence.page(2).unwrap().nonzero_dims(), b.sequence.page(2).unwrap().nonzero_dims());
        prop_assert!(check_e2(&moved, &r, &b.sequence).unwrap().passed());
    }

    #[test]
    fn rank_nullity(rows in 1usize..6, cols in 1usize..6, seed in prop::collection::vec(-5i64..=5, 36), pi in 0usize..3) {
        let f = [Field::Rational, Field::prime(2).unwrap(), Field::prime(7).unwrap()][pi];
        let data: Vec<Scalar> = seed[..rows * cols].iter().map(|&x| f.from_i64(x)).collect();
        let m = Matrix::from_data(f, rows, cols, data);
        let ker = m.kernel_basis();
        prop_assert_eq!(m.rank() + ker.len(), cols);
        for v in &ker {
            prop_assert!(m.mul_vec(v).iter().all(|x| x.is_zero()));
        }
        prop_assert_eq!(m.rank(), m.transpose().rank());
    }
}

mod common;

use common::*;
use jtk_core::koszul::*;
use jtk_core::ops::h0;
use jtk_core::{Error, Length, Module, Monomial, Poly, Ring, Submodule};
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn lengths(r: &Ring, m: &Module, s: &ParameterSequence) -> Vec<Length> {
    koszul_lengths(r, m, s).unwrap()
}

#[test]
fn regular_sequence_has_no_higher_homology() {
    let r = ring("x,y", &[]);
    let m = ring_module(&r);
    let s = seq(&r, &["x", "y"]);
    assert_eq!(lengths(&r, &m, &s), vec![Length::Finite(0), Length::Finite(0)]);
    assert!(is_d_sequence(&r, &m, &s).unwrap());
    assert!(is_amenable(&r, &m, &s).unwrap());
    assert!(is_proper_sequence(&r, &m, &s).unwrap());
    assert_eq!(chi1(&r, &m, &s, 2).unwrap(), 0);
    let v = is_strong_d_sequence(&r, &m, &s, 3).unwrap();
    assert!(v.holds);
    assert!(koszul_homology(&r, &m, &s, 3).is_err());
}

#[test]
fn maximal_ideal_as_module() {
    // M = (a,b,c) ⊂ k[a,b,c], x = a,b: H₁ ≅ k and h⁰(M/IM) = 2
    let r = ring("a,b,c", &[]);
    let m = ideal_module(&r, &["a", "b", "c"]);
    let s = seq(&r, &["a", "b"]);
    assert_eq!(lengths(&r, &m, &s), vec![Length::Finite(1), Length::Finite(0)]);
    assert!(is_d_sequence(&r, &m, &s).unwrap());
    assert!(is_amenable(&r, &m, &s).unwrap());
    let rep = koszul_report(&r, &m, &s).unwrap();
    assert_eq!(rep.values(), Some(vec![2, 1, 0]));
    assert_eq!(rep.chi1, vec![Some(0), Some(1)]);
}

#[test]
fn xz_example_predicates() {
    for q in 0..=2 {
        let r = xz_ring(q);
        let m = ring_module(&r);
        let s = xz_seq(&r, q);
        assert!(is_partial_sop(&r, &m, &s).unwrap());
        assert!(!is_d_sequence(&r, &m, &s).unwrap());
        assert_eq!(d_sequence_failure(&r, &m, &s).unwrap(), Some((1, 1)));
        assert!(!is_amenable(&r, &m, &s).unwrap());
    }
    let r = xz_ring(0);
    let m = ring_module(&r);
    let v = is_strong_d_sequence(&r, &m, &seq(&r, &["z"]), 2).unwrap();
    assert!(!v.holds);
}

#[test]
fn sequences_inside_the_embedded_component() {
    for d in 2..=3 {
        let r = seq_cm_ring(d);
        let m = ring_module(&r);
        let s = seq(&r, &["y1"]);
        assert!(is_partial_sop(&r, &m, &s).unwrap());
        assert!(is_d_sequence(&r, &m, &s).unwrap());
        assert!(!is_amenable(&r, &m, &s).unwrap());
        if d == 3 {
            let s = seq(&r, &["y1", "y2"]);
            assert!(is_d_sequence(&r, &m, &s).unwrap());
            assert!(!is_amenable(&r, &m, &s).unwrap());
        }
    }
}

#[test]
fn amenability_refuses_non_parameters() {
    let r = ring("x,y", &[]);
    let m = ring_module(&r);
    assert!(matches!(is_amenable(&r, &m, &seq(&r, &["x", "x"])), Err(Error::NotApplicable(_))));
}

#[test]
fn proper_sequence_witness() {
    // x, y on k[x,y,z]/(x*z): H₁(x) = (0:x) = (z) is not killed by y
    let r = ring("x,y,z", &["x*z"]);
    let m = ring_module(&r);
    let s = seq(&r, &["x", "y"]);
    let w = proper_sequence_failure(&r, &m, &s).unwrap();
    assert_eq!(w.map(|(i, j, _)| (i, j)), Some((1, 1)));
    assert!(!is_d_sequence(&r, &m, &s).unwrap());
}

#[test]
fn construction_on_polynomial_ring() {
    let r = ring("x,y", &[]);
    let m = ring_module(&r);
    let within = ps(&r, &["x", "y"]);
    let s = construct_d_sequence_sop(&r, &m, &within, 11).unwrap();
    assert_eq!(s.len(), 2);
    assert!(is_d_sequence(&r, &m, &s).unwrap());
    assert_eq!(lengths(&r, &m, &s), vec![Length::Finite(0), Length::Finite(0)]);
    assert_eq!(construct_d_sequence_sop(&r, &m, &within, 11).unwrap(), s);
}

#[test]
fn construction_on_xz_ring() {
    let r = xz_ring(0);
    let m = ring_module(&r);
    let within = ps(&r, &["x", "y", "z"]);
    let s = construct_d_sequence_sop(&r, &m, &within, 3).unwrap();
    assert_eq!(s.len(), 2);
    assert!(is_partial_sop(&r, &m, &s).unwrap());
    assert!(is_d_sequence(&r, &m, &s).unwrap());
    assert_eq!(construct_d_sequence_sop(&r, &m, &within, 3).unwrap(), s);
}

// ---------------------------------------------------------------------------
// dense oracle for Koszul homology of S/J

fn block_basis(n: usize, xs: &[u32], i: usize, k: i64) -> Vec<(Vec<usize>, Monomial)> {
    let mut out = Vec::new();
    for set in subsets(xs.len(), i) {
        let d = k - set.iter().map(|&j| xs[j] as i64).sum::<i64>();
        if d >= 0 {
            for m in monomials_of_degree(n, d as u32) {
                out.push((set.clone(), m));
            }
        }
    }
    out
}

fn subsets(r: usize, i: usize) -> Vec<Vec<usize>> {
    (0u32..1 << r)
        .filter(|b| b.count_ones() as usize == i)
        .map(|b| (0..r).filter(|j| b >> j & 1 == 1).collect())
        .collect()
}

fn row(basis: &[(Vec<usize>, Monomial)], entries: &[(Vec<usize>, Poly, u64)]) -> Vec<u64> {
    const P: u64 = 32003;
    let mut v = vec![0u64; basis.len()];
    for (set, f, sign) in entries {
        for (m, c) in f.terms() {
            let j = basis.iter().position(|(s, b)| s == set && b == m).unwrap();
            v[j] = (v[j] + *c as u64 * sign) % P;
        }
    }
    v
}

fn boundary_rows(
    r: &Ring,
    xs: &[Poly],
    src: &[(Vec<usize>, Monomial)],
    tgt: &[(Vec<usize>, Monomial)],
) -> Vec<Vec<u64>> {
    src.iter()
        .map(|(set, m)| {
            let entries: Vec<_> = set
                .iter()
                .enumerate()
                .map(|(t, &j)| {
                    let mut rest = set.clone();
                    rest.remove(t);
                    let f = xs[j].mul_term(m, 1, r.ctx());
                    (rest, f, if t % 2 == 0 { 1 } else { 32002 })
                })
                .collect();
            row(tgt, &entries)
        })
        .collect()
}

fn relation_rows(
    r: &Ring,
    gens: &[Poly],
    basis: &[(Vec<usize>, Monomial)],
    xs: &[u32],
    i: usize,
    k: i64,
) -> Vec<Vec<u64>> {
    let n = r.nvars();
    let mut rows = Vec::new();
    for set in subsets(xs.len(), i) {
        let d = k - set.iter().map(|&j| xs[j] as i64).sum::<i64>();
        for g in gens {
            let e = d - g.degree().unwrap() as i64;
            if e >= 0 {
                for m in monomials_of_degree(n, e as u32) {
                    rows.push(row(basis, &[(set.clone(), g.mul_term(&m, 1, r.ctx()), 1)]));
                }
            }
        }
    }
    rows
}

fn concat(a: &[Vec<u64>], b: &[Vec<u64>]) -> Vec<Vec<u64>> {
    a.iter().chain(b).cloned().collect()
}

/// dim_k Hᵢ(𝐱; S/J)_k by rank-nullity on the degree-k strand.
fn oracle_dim(r: &Ring, gens: &[Poly], xs: &[Poly], i: usize, k: i64) -> i64 {
    let n = r.nvars();
    let degs: Vec<u32> = xs.iter().map(|x| x.degree().unwrap()).collect();
    let here = block_basis(n, &degs, i, k);
    if here.is_empty() {
        return 0;
    }
    let rank0 = |rows: Vec<Vec<u64>>| if rows.is_empty() { 0 } else { dense_rank(rows) as i64 };
    let cycles = if i == 0 {
        here.len() as i64
    } else {
        let lower = block_basis(n, &degs, i - 1, k);
        let d = boundary_rows(r, xs, &here, &lower);
        let jl = relation_rows(r, gens, &lower, &degs, i - 1, k);
        here.len() as i64 - (rank0(concat(&d, &jl)) - rank0(jl))
    };
    let mut bnd = relation_rows(r, gens, &here, &degs, i, k);
    if i < xs.len() {
        let upper = block_basis(n, &degs, i + 1, k);
        bnd.extend(boundary_rows(r, xs, &upper, &here));
    }
    cycles - rank0(bnd)
}

fn random_instance(seed: u64) -> (Ring, Vec<Poly>, Vec<Poly>) {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let r = ring("a,b,c", &[]);
    let mono = |rng: &mut ChaCha8Rng, d: u32| {
        let mut e = vec![0u32; 3];
        for _ in 0..d {
            e[rng.random_range(0..3)] += 1;
        }
        Monomial::from_exps(&e)
    };
    let gens: Vec<Poly> = (0..rng.random_range(1..=3))
        .map(|_| {
            let d = rng.random_range(2..=3);
            let t: Vec<_> =
                (0..rng.random_range(1..=2)).map(|_| (mono(&mut rng, d), rng.random_range(1..32003))).collect();
            Poly::from_terms(t, r.ctx())
        })
        .filter(|f: &Poly| !f.is_zero())
        .collect();
    let xs: Vec<Poly> = (0..rng.random_range(1..=2))
        .map(|_| {
            let t: Vec<_> = (0..3).map(|v| (Monomial::var(v), rng.random_range(0..4u32))).collect();
            Poly::from_terms(t, r.ctx())
        })
        .filter(|f: &Poly| !f.is_zero())
        .collect();
    (r, gens, xs)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn homology_matches_dense_strands(seed in any::<u64>()) {
        let (r, gens, xs) = random_instance(seed);
        prop_assume!(!gens.is_empty() && !xs.is_empty());
        let rel = Submodule::ideal(&r, &gens).unwrap();
        let m = Module::new(&r, Submodule::free(&[0]), rel).unwrap();
        let s = ParameterSequence::new(&r, xs.clone()).unwrap();
        for i in 0..=xs.len() {
            let h = koszul_homology(&r, &m, &s, i).unwrap().series(&r);
            for k in 0..=6 {
                prop_assert_eq!(h.coeff(k), oracle_dim(&r, &gens, &xs, i, k as i64), "i={} k={}", i, k);
            }
        }
    }

    #[test]
    fn d_sequences_are_proper(seed in any::<u64>()) {
        let (r, gens, xs) = random_instance(seed);
        prop_assume!(!gens.is_empty() && !xs.is_empty());
        let m = Module::new(&r, Submodule::free(&[0]), Submodule::ideal(&r, &gens).unwrap()).unwrap();
        let s = ParameterSequence::new(&r, xs).unwrap();
        if is_d_sequence(&r, &m, &s).unwrap() {
            prop_assert!(is_proper_sequence(&r, &m, &s).unwrap());
            // later elements kill the homology of every prefix as well
            for i in 1..s.len() {
                for k in i + 1..=s.len() {
                    prop_assert!(annihilation_failure(&r, &m, &s, i, k).unwrap().is_none());
                }
            }
        }
    }

    #[test]
    fn rigidity_of_finite_homology(seed in any::<u64>()) {
        let (r, gens, xs) = random_instance(seed);
        prop_assume!(!gens.is_empty() && !xs.is_empty());
        let m = Module::new(&r, Submodule::free(&[0]), Submodule::ideal(&r, &gens).unwrap()).unwrap();
        let s = ParameterSequence::new(&r, xs).unwrap();
        let ls = koszul_lengths(&r, &m, &s).unwrap();
        if ls[0].is_finite() {
            prop_assert!(ls.iter().all(|l| l.is_finite()));
        }
    }

    #[test]
    fn chi1_equals_h0_for_amenable_d_sequences(seed in any::<u64>()) {
        let (r, gens, xs) = random_instance(seed);
        prop_assume!(!gens.is_empty() && !xs.is_empty());
        let m = Module::new(&r, Submodule::free(&[0]), Submodule::ideal(&r, &gens).unwrap()).unwrap();
        let s = ParameterSequence::new(&r, xs).unwrap();
        prop_assume!(is_partial_sop(&r, &m, &s).unwrap());
        prop_assume!(is_amenable(&r, &m, &s).unwrap() && is_d_sequence(&r, &m, &s).unwrap());
        for k in 1..=s.len() {
            let lhs = chi1(&r, &m, &s, k).unwrap();
            prop_assert!(lhs >= 0);
            let q = quotient_by_ideal(&r, &m, s.prefix_ideal(k - 1)).unwrap();
            prop_assert_eq!(lhs, h0(&r, &q).unwrap() as i64);
        }
    }
}

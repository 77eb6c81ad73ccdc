mod common;

use common::*;
use jtk_core::ops::{annihilator, colon_elem, h0, intersect, kernel, saturate, syzygies, torsion};
use jtk_core::{FreeVector, Length, Module, Monomial, Poly, Ring, Submodule};
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

#[test]
fn duplicate_generator() {
    let r = ring("x,y", &[]);
    let i = ideal(&r, &["x", "x"]);
    assert_eq!(i.polys(&r), vec![p(&r, "x")]);
}

#[test]
fn buchberger_criterion_on_small_ideal() {
    let r = ring("x,y", &[]);
    let i = ideal(&r, &["x^2 - y^2", "x*y"]);
    assert!(i.satisfies_buchberger(&r));
    assert!(i.contains(&r, &vec1(&r, "y^3")).unwrap());
}

#[test]
fn monomial_ideal_is_its_own_basis() {
    let r = ring("x,y,z", &[]);
    let i = ideal(&r, &["x^2*z", "x*y^2", "x*y*z", "x*z^2"]);
    assert_eq!(i.basis().len(), 4);
    assert!(i.satisfies_buchberger(&r));
}

#[test]
fn normal_form_membership() {
    let r = ring("x,y,z", &[]);
    let i = ideal(&r, &["x^2*z", "x*y^2"]);
    assert!(i.normal_form(&r, &vec1(&r, "x^2*z")).unwrap().is_zero());
    assert!(!i.contains(&r, &vec1(&r, "x*y*z")).unwrap());
}

#[test]
fn colon_by_nilpotent() {
    let r = ring("x,y", &["x^2"]);
    let rel = Submodule::relations(&r, &[0]).unwrap();
    let c = colon_elem(&r, &Submodule::free(&[0]), &p(&r, "x"), &rel).unwrap();
    assert_eq!(c, ideal(&r, &["x"]));
}

#[test]
fn annihilators_of_z_in_xz_ring() {
    let r = xz_ring(0);
    let rel = Submodule::relations(&r, &[0]).unwrap();
    let one = Submodule::free(&[0]);
    let c1 = colon_elem(&r, &one, &p(&r, "z"), &rel).unwrap();
    let c2 = colon_elem(&r, &one, &p(&r, "z^2"), &rel).unwrap();
    assert_eq!(c1, ideal(&r, &["x^2", "x*y", "x*z"]));
    assert_eq!(c2, ideal(&r, &["x"]));
}

#[test]
fn saturation_examples() {
    let r = ring("x,y", &[]);
    let w = ideal(&r, &["x^2", "x*y"]);
    let m = ps(&r, &["x", "y"]);
    let s = saturate(&r, &Submodule::free(&[0]), &m, &w).unwrap();
    assert_eq!(s, ideal(&r, &["x"]));
    assert_eq!(torsion(&r, &w).unwrap(), s);
    let unit = saturate(&r, &Submodule::free(&[0]), &[Poly::constant(1)], &w).unwrap();
    assert_eq!(unit, w);
    // (x²) is already saturated
    let w = ideal(&r, &["x^2"]);
    assert_eq!(saturate(&r, &Submodule::free(&[0]), &m, &w).unwrap(), w);
}

#[test]
fn length_of_sv_ring_modulo_sop() {
    let r = sv_ring();
    let m = ring_module(&r);
    let q = m.quotient_by(&r, &[vec1(&r, "y1+z1"), vec1(&r, "y2+z2"), vec1(&r, "y3+z3")]).unwrap();
    assert_eq!(q.length(&r), Length::Finite(5));
    assert!(h0(&r, &q).unwrap() <= 5);
    assert_eq!(h0(&r, &q).unwrap(), 5);
}

#[test]
fn lengths_and_dimensions() {
    let r = ring("x,y", &["x", "y"]);
    assert_eq!(ring_module(&r).length(&r), Length::Finite(1));
    let r = ring("x", &["x^3"]);
    assert_eq!(ring_module(&r).length(&r), Length::Finite(3));
    let r = ring("x,y,z", &[]);
    assert_eq!(ring_module(&r).dimension(&r), 3);
    assert_eq!(ring_module(&r).length(&r), Length::Infinite);
    assert_eq!(ring_module(&xz_ring(0)).dimension(&xz_ring(0)), 2);
    let r = seq_cm_ring(2);
    assert_eq!(ring_module(&r).dimension(&r), 2);
}

#[test]
fn hilbert_series_examples() {
    let r = ring("x", &[]);
    assert_eq!(ring_module(&r).series(&r).to_string(), "1/(1-t)");
    let r = ring("x,y", &["x^2", "x*y", "y^2"]);
    let s = ring_module(&r).series(&r);
    assert_eq!(s.denom_exponent(), 0);
    assert_eq!(s.numerator(), &[1, 2]);
}

#[test]
fn syzygies_examples() {
    let r = ring("x,y", &[]);
    let (_, k) = syzygies(&r, &[0], &[vec1(&r, "x"), vec1(&r, "y")]).unwrap();
    assert_eq!(k.basis().len(), 1);
    let v = k.basis()[0].components(2, r.ctx());
    assert_eq!(v[0].mul(&p(&r, "x"), r.ctx()).add(&v[1].mul(&p(&r, "y"), r.ctx()), r.ctx()), Poly::zero());
    assert_eq!(v[0].degree(), Some(1));

    let gens = [vec1(&r, "x^2"), vec1(&r, "x*y")];
    let (_, k) = syzygies(&r, &[0], &gens).unwrap();
    let target = FreeVector::from_components(&[p(&r, "y"), p(&r, "-x")], &[2, 2], r.ctx().order, r.field());
    assert!(k.contains(&r, &target).unwrap());

    // free module: no syzygies among a basis
    let units: Vec<FreeVector> = (0..3).map(|i| FreeVector::unit(i, &[0, 1, 2])).collect();
    let (_, k) = syzygies(&r, &[0, 1, 2], &units).unwrap();
    assert!(k.is_zero());
}

#[test]
fn kernel_intersection_annihilator() {
    let r = ring("x,y", &[]);
    let sh = [0, 0];
    let id: Vec<FreeVector> = (0..2).map(|i| FreeVector::unit(i, &sh)).collect();
    assert!(kernel(&r, &sh, &id, &sh, &[]).unwrap().is_zero());
    assert_eq!(intersect(&r, &ideal(&r, &["x"]), &ideal(&r, &["y"])).unwrap(), ideal(&r, &["x*y"]));
    let k = Module::cokernel(&r, &[0], &[vec1(&r, "x"), vec1(&r, "y")]).unwrap();
    assert_eq!(annihilator(&r, &k).unwrap(), ideal(&r, &["x", "y"]));
}

// ---------------------------------------------------------------------------
// random instances

fn random_form(r: &Ring, deg: u32, rng: &mut ChaCha8Rng) -> Poly {
    let n = r.nvars();
    let mut terms = Vec::new();
    for _ in 0..rng.random_range(1..=3) {
        let mut e = vec![0u32; n];
        for _ in 0..deg {
            e[rng.random_range(0..n)] += 1;
        }
        terms.push((Monomial::from_exps(&e), rng.random_range(1..32003u32)));
    }
    Poly::from_terms(terms, r.ctx())
}

fn random_ideal(seed: u64) -> (Ring, Vec<Poly>) {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let r = ring("a,b,c", &[]);
    let k = rng.random_range(1..=4);
    let gens = (0..k).map(|_| random_form(&r, rng.random_range(1..=3), &mut rng)).collect();
    (r, gens)
}

/// dim_k (S/J)_d from the span of all m·g of degree d.
fn degreewise_dim(r: &Ring, gens: &[Poly], d: u32) -> i64 {
    let n = r.nvars();
    let basis = monomials_of_degree(n, d);
    let mut span = Vec::new();
    for g in gens {
        let gd = g.degree().unwrap();
        if gd <= d {
            for m in monomials_of_degree(n, d - gd) {
                span.push(g.mul_term(&m, 1, r.ctx()));
            }
        }
    }
    basis.len() as i64 - rank_mod_p(&span, &basis) as i64
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(40))]

    #[test]
    fn reduced_basis_satisfies_buchberger(seed in any::<u64>()) {
        let (r, gens) = random_ideal(seed);
        let i = Submodule::ideal(&r, &gens).unwrap();
        prop_assert!(i.satisfies_buchberger(&r));
        for g in &gens {
            prop_assert!(i.contains(&r, &jtk_core::submodule::poly_vector(&r, g)).unwrap());
        }
        // idempotent
        prop_assert_eq!(Submodule::ideal(&r, &i.polys(&r)).unwrap(), i);
    }

    #[test]
    fn normal_form_idempotent(seed in any::<u64>(), extra in any::<u64>()) {
        let (r, gens) = random_ideal(seed);
        let i = Submodule::ideal(&r, &gens).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(extra);
        let v = jtk_core::submodule::poly_vector(&r, &random_form(&r, rng.random_range(1..=4), &mut rng));
        let nf = i.normal_form(&r, &v).unwrap();
        prop_assert_eq!(i.normal_form(&r, &nf).unwrap(), nf);
    }

    #[test]
    fn colon_containments(seed in any::<u64>(), extra in any::<u64>()) {
        let (r, gens) = random_ideal(seed);
        let w = Submodule::ideal(&r, &gens).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(extra);
        let f = random_form(&r, rng.random_range(1..=2), &mut rng);
        let c = colon_elem(&r, &Submodule::free(&[0]), &f, &w).unwrap();
        prop_assert!(c.contains_all(&r, &w).unwrap());
        for b in c.basis() {
            prop_assert!(w.contains(&r, &b.mul_poly(&f, &jtk_core::vector::TermOrder::canonical(r.ctx().order), r.field())).unwrap());
        }
    }

    #[test]
    fn saturation_idempotent(seed in any::<u64>()) {
        let (r, gens) = random_ideal(seed);
        let w = Submodule::ideal(&r, &gens).unwrap();
        let m = ps(&r, &["a", "b", "c"]);
        let s = saturate(&r, &Submodule::free(&[0]), &m, &w).unwrap();
        prop_assert_eq!(saturate(&r, &Submodule::free(&[0]), &m, &s).unwrap(), s.clone());
        prop_assert_eq!(torsion(&r, &w).unwrap(), s);
    }

    #[test]
    fn length_finite_iff_dimension_zero(seed in any::<u64>()) {
        let (r, gens) = random_ideal(seed);
        let m = Module::new(&r, Submodule::free(&[0]), Submodule::ideal(&r, &gens).unwrap()).unwrap();
        prop_assert_eq!(m.length(&r).is_finite(), m.dimension(&r) <= 0);
    }

    #[test]
    fn series_matches_degreewise_rank(seed in any::<u64>()) {
        let (r, gens) = random_ideal(seed);
        let m = Module::new(&r, Submodule::free(&[0]), Submodule::ideal(&r, &gens).unwrap()).unwrap();
        let s = m.series(&r);
        for d in 0..=8 {
            prop_assert_eq!(s.coeff(d), degreewise_dim(&r, &gens, d as u32));
        }
    }

    #[test]
    fn cumulative_hilbert_function_degree(seed in any::<u64>()) {
        let (r, gens) = random_ideal(seed);
        let m = Module::new(&r, Submodule::free(&[0]), Submodule::ideal(&r, &gens).unwrap()).unwrap();
        let s = m.series(&r);
        let dim = m.dimension(&r);
        // Σ_{k≤K} HF(k) is eventually of degree dim − 1 (its dim-th difference is the constant e₀ > 0)
        let cum: Vec<i64> = (0..30).scan(0i64, |acc, k| { *acc += s.coeff(k); Some(*acc) }).collect();
        let mut diff = cum[18..].to_vec();
        for _ in 0..dim.max(0) {
            diff = diff.windows(2).map(|w| w[1] - w[0]).collect();
        }
        if dim <= 0 {
            prop_assert!(diff.windows(2).all(|w| w[0] == w[1]));
        } else {
            prop_assert!(diff.iter().all(|&v| v == diff[0] && v > 0));
            // one more difference vanishes
            prop_assert!(diff.windows(2).all(|w| w[1] == w[0]));
        }
    }
}

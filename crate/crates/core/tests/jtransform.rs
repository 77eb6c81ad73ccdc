mod common;

use common::*;
use jtk_core::jtransform::*;
use jtk_core::koszul::*;
use jtk_core::ops::h0;
use jtk_core::series::binomial;
use jtk_core::GradedSeries;
use std::time::Instant;

#[test]
fn xz_example_series() {
    for q in 0..=2 {
        let t = Instant::now();
        let r = xz_ring(q);
        let m = ring_module(&r);
        let s = xz_seq(&r, q);
        let a = j_function_direct(&r, &m, &s, 15).unwrap();
        assert!(a.psi.len() >= 16);
        // t/(1−t)^q
        let expect = GradedSeries::new(vec![0, 1], 0, q as u32);
        assert_eq!(a.series, expect, "q = {q}");
        for n in 0..=15 {
            assert_eq!(a.lambda[n] as i64, expect.coeff(n as i32));
        }
        assert_eq!(a.dim_h, q as i32);
        eprintln!("q = {q}: {:?}", t.elapsed());
    }
}

#[test]
fn r_zero_gives_h0() {
    let r = ring("x,y", &["x^2", "x*y"]);
    let m = ring_module(&r);
    let s = seq(&r, &[]);
    let a = j_function_direct(&r, &m, &s, 6).unwrap();
    assert!(a.psi.iter().all(|&v| v == 1));
    assert_eq!(a.j, vec![1]);
}

#[test]
fn regular_sequence_with_positive_depth_quotient() {
    let r = ring("x,y,z", &[]);
    let m = ring_module(&r);
    let s = seq(&r, &["x", "y"]);
    let rep = j_report(&r, &m, &s, 8).unwrap();
    assert!(rep.route_a.psi.iter().all(|&v| v == 0));
    assert_eq!(rep.route_a.dim_h, -1);
    assert!(rep.routes_agree);
    assert!(rep.regular);
    assert_eq!(rep.route_b.unwrap().j, vec![0, 0, 0]);
}

#[test]
fn maximal_ideal_example() {
    let r = ring("a,b,c", &[]);
    let m = ideal_module(&r, &["a", "b", "c"]);
    let s = seq(&r, &["a", "b"]);
    let rep = j_report(&r, &m, &s, 8).unwrap();
    assert_eq!(rep.route_a.j, vec![1, -1, 0]);
    assert_eq!(rep.route_b.as_ref().unwrap().j, vec![1, -1, 0]);
    assert_eq!(rep.route_c.as_ref().unwrap().j, vec![1, -1, 0]);
    assert!(rep.routes_agree);
    // λ(Hᵢ) = λ(C)·C(r, i+1) with λ(C) = 1
    let h = &rep.route_b.as_ref().unwrap().h;
    for i in 1..=2 {
        assert_eq!(h[i] as i64, binomial(2, i as i64 + 1));
    }
    assert!(koszul_length_identity(&r, &m, &s).unwrap());
    assert!(chi1_differences(&r, &m, &s, &rep.route_a.j).unwrap());
    let e = euler_bound(&r, &m, &s, rep.route_a.j[1]).unwrap();
    assert!(e.holds);
    assert!(e.prefix_regular);
}

#[test]
fn one_element_sequences() {
    // −j₁ = h⁰(M) when r = 1; zero once depth M > 0
    let r = ring("x,y", &["x^2", "x*y"]);
    let m = ring_module(&r);
    let s = seq(&r, &["y"]);
    let c = j_coeffs_local(&r, &m, &s).unwrap();
    assert_eq!(-c.j[1], h0(&r, &m).unwrap() as i64);
    let r = ring("x,y", &["x^2"]);
    let m = ring_module(&r);
    let c = j_coeffs_local(&r, &m, &seq(&r, &["y"])).unwrap();
    assert_eq!(c.j[1], 0);
}

#[test]
fn routes_b_c_refuse_outside_hypotheses() {
    let r = xz_ring(1);
    let m = ring_module(&r);
    let s = xz_seq(&r, 1);
    assert!(matches!(j_coeffs_koszul(&r, &m, &s), Err(jtk_core::Error::NotApplicable(_))));
    assert!(matches!(j_coeffs_local(&r, &m, &s), Err(jtk_core::Error::NotApplicable(_))));
}

#[test]
fn sv_example_series() {
    let r = sv_ring();
    let m = ring_module(&r);
    let s = seq(&r, &["y1+z1", "y2+z2"]);
    let rep = j_report(&r, &m, &s, 6).unwrap();
    assert_eq!(rep.route_a.series, GradedSeries::new(vec![3, -3, 1], 0, 2));
    assert!(rep.routes_agree);
    let c = rep.route_c.unwrap();
    assert_eq!(c.k, vec![1, 1, 1]);
}

#[test]
fn embedded_component_examples() {
    for d in 2..=3 {
        let r = seq_cm_ring(d);
        let m = ring_module(&r);
        let s = seq(&r, &["y1"]);
        assert_eq!(j_function_direct(&r, &m, &s, 8).unwrap().dim_h, -1);
        let s = seq(&r, &["x+y1"]);
        let a = j_function_direct(&r, &m, &s, 8).unwrap();
        for (n, &v) in a.psi.iter().enumerate() {
            assert_eq!(v, n as u64 + 1);
        }
    }
}

#[test]
fn degree_zero_generation_and_intersections() {
    let r = ring("a,b,c", &[]);
    let m = ideal_module(&r, &["a", "b", "c"]);
    let s = seq(&r, &["a", "b"]);
    let mut f = JFiltration::new(&m);
    assert!(generated_in_degree_zero(&r, &m, &s, &mut f, 5).unwrap());
    assert!(saturation_intersection_identity(&r, &m, &s, &mut f, 5).unwrap());
}

#[test]
fn gr_pieces_telescope() {
    let r = ring("x,y", &["x^3"]);
    let m = ring_module(&r);
    let s = seq(&r, &["x", "y"]);
    let mut prev = 0u64;
    for n in 0..5 {
        let piece = gr_piece(&r, &m, &s, n).unwrap().length(&r).finite().unwrap();
        let q = quotient_by_ideal(&r, &m, &power_gens(&r, &s, n + 1)).unwrap().length(&r).finite().unwrap();
        assert_eq!(piece, q - prev);
        prev = q;
    }
}

fn power_gens(r: &jtk_core::Ring, s: &ParameterSequence, n: u32) -> Vec<jtk_core::Poly> {
    let mut acc = vec![jtk_core::Poly::constant(1)];
    for _ in 0..n {
        acc = acc.iter().flat_map(|f| s.elems().iter().map(move |g| f.mul(g, r.ctx()))).collect();
    }
    acc
}

#[test]
fn probe_verdicts() {
    let r = ring("x,y,z", &[]);
    let m = ring_module(&r);
    let rec = conjecture_probe(&r, &m, &seq(&r, &["x", "y"]), false);
    assert_eq!(rec.verdict, Verdict::Supporting);
    let r = xz_ring(1);
    let rec = conjecture_probe(&r, &ring_module(&r), &xz_seq(&r, 1), false);
    assert_eq!(rec.verdict, Verdict::NotApplicable);
}

#[test]
fn coefficient_extraction_inverts_binomial_form() {
    // ψ(n) = 2C(n+2,2) − 3C(n+1,1) + 1
    let r = 2;
    let vals: Vec<u64> = (4..=6).map(|n| (2 * binomial(n + 2, 2) - 3 * binomial(n + 1, 1) + 1) as u64).collect();
    assert_eq!(coefficients_from_values(&vals, 4, r), vec![2, -3, 1]);
}

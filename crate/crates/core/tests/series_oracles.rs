//! Series evaluators against the 60-digit reference values in
//! `fixtures/oracles.json` (regenerate with `fixtures/gen_oracles.py`).

#![allow(clippy::neg_cmp_op_on_partial_ord)]

mod common;

use common::{oracles, rel_err};
use helmholtz_gaspt::hyperfun::{
    a2_3, a2_3_direct, a2_3_expansion, gauss_2f1, h3, kdf_1_1_0, pochhammer, A2Params, SeriesConfig,
};

const TOL: f64 = 1e-10;

fn check(name: &str, cases: &[common::Case], eval: impl Fn(&[f64]) -> f64) {
    assert!(cases.len() >= 20, "{name}: only {} cases", cases.len());
    let mut worst: f64 = 0.0;
    let mut bad = Vec::new();
    for c in cases {
        let got = eval(&c.args);
        let e = rel_err(got, c.want());
        if !(e <= TOL) {
            bad.push(format!("{:?}: got {got:e}, want {}, rel err {e:e}", c.args, c.value));
        }
        worst = worst.max(e);
    }
    println!("{name}: {} cases, worst relative error {worst:.2e}", cases.len());
    assert!(bad.is_empty(), "{name}:\n{}", bad.join("\n"));
}

fn a2p(v: &[f64]) -> A2Params {
    A2Params::new(v[0], v[1], v[2], v[3], v[4])
}

#[test]
fn gauss_2f1_matches_oracle() {
    let o = oracles();
    let cfg = SeriesConfig::default();
    check("gauss_2f1", &o.gauss_2f1, |v| {
        gauss_2f1(v[0], v[1], v[2], v[3], &cfg).unwrap().value
    });
}

#[test]
fn gauss_2f1_within_its_own_error_estimate() {
    let o = oracles();
    let cfg = SeriesConfig::default();
    for c in &o.gauss_2f1_partial_sum {
        let v = &c.args;
        let r = gauss_2f1(v[0], v[1], v[2], v[3], &cfg).unwrap();
        let want = c.want();
        assert!(
            (r.value - want).abs() <= r.abs_error_estimate.max(f64::EPSILON * want.abs()),
            "{v:?}: {r:?} vs {want}"
        );
    }
}

#[test]
fn h3_matches_oracle() {
    let o = oracles();
    let cfg = SeriesConfig::default();
    check("h3", &o.h3, |v| h3(v[0], v[1], v[2], v[3], v[4], &cfg).unwrap().value);
}

#[test]
fn a2_direct_matches_oracle() {
    let o = oracles();
    let cfg = SeriesConfig::default();
    check("a2_3_direct", &o.a2_3_direct, |v| {
        a2_3_direct(&a2p(v), v[5], v[6], v[7], &cfg).unwrap().value
    });
}

#[test]
fn a2_expansion_matches_oracle() {
    let o = oracles();
    let cfg = SeriesConfig::default();
    check("a2_3_expansion", &o.a2_3_expansion, |v| {
        a2_3_expansion(&a2p(v), v[5], v[6], v[7], &cfg).unwrap().value
    });
    check("a2_3 (production routing)", &o.a2_3_expansion, |v| {
        a2_3(&a2p(v), v[5], v[6], v[7], &cfg).unwrap().value
    });
}

#[test]
fn kdf_matches_oracle() {
    let o = oracles();
    let cfg = SeriesConfig::default();
    check("kdf_1_1_0", &o.kdf_1_1_0, |v| {
        kdf_1_1_0(v[0], v[1], v[2], v[3], v[4], v[5], v[6], &cfg).unwrap().value
    });
}

#[test]
fn scalar_references() {
    let o = oracles();
    let cfg = SeriesConfig::default();
    assert!(rel_err(pochhammer(0.7, -2).unwrap(), o.scalar("pochhammer_0.7_-2")) < 1e-14);
    let g = gauss_2f1(1.0, 1.0, 2.0, 0.5, &cfg).unwrap().value;
    assert!(rel_err(g, o.scalar("gauss_1_1_2_half")) < 1e-12);
}

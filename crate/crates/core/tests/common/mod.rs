#![allow(dead_code)]

use std::collections::BTreeMap;

use serde::Deserialize;

#[derive(Debug, Deserialize)]
pub struct Case {
    pub args: Vec<f64>,
    pub value: String,
}

impl Case {
    pub fn want(&self) -> f64 {
        self.value.parse().expect("oracle value")
    }
}

#[derive(Debug, Deserialize)]
pub struct Oracles {
    pub gauss_2f1: Vec<Case>,
    pub gauss_2f1_partial_sum: Vec<Case>,
    pub h3: Vec<Case>,
    pub a2_3_direct: Vec<Case>,
    pub a2_3_expansion: Vec<Case>,
    pub kdf_1_1_0: Vec<Case>,
    pub scalars: BTreeMap<String, String>,
}

impl Oracles {
    pub fn scalar(&self, key: &str) -> f64 {
        self.scalars[key].parse().expect("oracle scalar")
    }
}

pub fn oracles() -> Oracles {
    let text = include_str!("../fixtures/oracles.json");
    serde_json::from_str(text).expect("oracles.json")
}

pub fn rel_err(got: f64, want: f64) -> f64 {
    (got - want).abs() / want.abs().max(1e-300)
}

//! Property suites shared by the `properties` test target and the
//! acceptance runner. Each suite runs `CASES` generated cases with a
//! deterministic generator.

#![allow(dead_code)]

pub mod correlate;
pub mod dioph;
pub mod exactlin;
pub mod fracsolve;
pub mod gen;
pub mod nilalg;
pub mod rates;

use proptest::strategy::Strategy;
use proptest::test_runner::{Config, RngAlgorithm, TestCaseError, TestRng, TestRunner};

pub const CASES: u32 = 256;

pub type Case = Result<(), TestCaseError>;

pub struct Suite {
    pub module: &'static str,
    pub name: &'static str,
    pub run: fn() -> Result<u32, String>,
}

/// Runs `test` on `cases` values drawn from `s`; returns the case count.
pub fn check<S: Strategy>(cases: u32, s: S, test: impl Fn(S::Value) -> Case) -> Result<u32, String> {
    let config = Config {
        cases,
        failure_persistence: None,
        max_shrink_iters: 256,
        ..Config::default()
    };
    let mut runner = TestRunner::new_with_rng(config, TestRng::deterministic_rng(RngAlgorithm::ChaCha));
    runner.run(&s, test).map(|_| cases).map_err(|e| e.to_string())
}

pub fn all() -> Vec<Suite> {
    let mut v = Vec::new();
    v.extend(exactlin::suites());
    v.extend(nilalg::suites());
    v.extend(dioph::suites());
    v.extend(rates::suites());
    v.extend(fracsolve::suites());
    v.extend(correlate::suites());
    v
}

#[macro_export]
macro_rules! suites {
    ($module:literal: $($f:ident),* $(,)?) => {
        pub fn suites() -> Vec<$crate::props::Suite> {
            vec![$($crate::props::Suite { module: $module, name: stringify!($f), run: $f }),*]
        }
    };
}

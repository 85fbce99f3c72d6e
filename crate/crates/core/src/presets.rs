//! The eight reference parameter sets, periods 2 through 9, all with
//! `mu = 100 - 1/6`.

use crate::error::Result;
use crate::matrix::MatrixSpec;
use crate::rational::Rational;

pub const REFERENCE_MU: &str = "100-1/6";

const SETS: [&[&str]; 8] = [
    &["7/3", "5/3"],
    &["10/3", "1/3", "8/3"],
    &["10/3", "1/3", "2/3", "5/3"],
    &["20/9", "1/9", "2/9", "1/3", "5/9"],
    &["2", "1/2", "2/3", "1", "1/3", "1/3"],
    &["14/5", "1/5", "2/5", "1", "3/5", "4/5", "1/5"],
    &["20/7", "2/7", "4/7", "6/7", "1/7", "5/7", "3/7", "1"],
    &["20/7", "2/7", "4/7", "6/7", "1/7", "5/7", "3/7", "1", "1/7"],
];

#[derive(Debug, Clone, PartialEq)]
pub struct Preset {
    pub mu: Rational,
    pub a: Vec<Rational>,
}

impl Preset {
    pub fn period(&self) -> usize {
        self.a.len()
    }

    pub fn spec(&self, n: usize) -> Result<MatrixSpec> {
        MatrixSpec::new(self.mu.clone(), self.a.clone(), n)
    }
}

/// All eight sets, ordered by period.
pub fn reference_sets() -> Vec<Preset> {
    let mu: Rational = REFERENCE_MU.parse().expect("valid literal");
    SETS.iter()
        .map(|a| Preset {
            mu: mu.clone(),
            a: a.iter()
                .map(|s| s.parse().expect("valid literal"))
                .collect(),
        })
        .collect()
}

/// The set with the given period, if there is one.
pub fn reference_set(period: usize) -> Option<Preset> {
    reference_sets().into_iter().find(|p| p.period() == period)
}

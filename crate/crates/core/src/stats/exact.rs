//! Exact laws on the small map spaces, in rational arithmetic.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::bijection::psi;
use crate::error::Result;
use crate::map::{enumerate_maps, loop_count_euler, CanonicalForm};
use crate::sampler::enumerate_wn;

/// Probability of each doubly rooted map class (stars ignored).
pub type ExactLaw = BTreeMap<CanonicalForm, BigRational>;

/// A loop weight `q` with rational square root, or one of the two limits.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ExactQ {
    Zero,
    /// Holds `sqrt(q)`.
    Square(BigRational),
    Infinite,
}

impl ExactQ {
    pub fn from_sqrt(num: i64, den: i64) -> Self {
        if num == 0 {
            ExactQ::Zero
        } else {
            ExactQ::Square(BigRational::new(BigInt::from(num), BigInt::from(den)))
        }
    }

    /// `p = sqrt(q) / (2 + sqrt(q))`.
    pub fn p(&self) -> BigRational {
        match self {
            ExactQ::Zero => BigRational::zero(),
            ExactQ::Square(s) => s / (BigRational::from_integer(2.into()) + s),
            ExactQ::Infinite => BigRational::one(),
        }
    }

    /// Unnormalized weight of a configuration with `loops` loops and `n`
    /// edges. The limits keep only the extreme loop numbers.
    pub fn loop_weight(&self, loops: usize, n: usize) -> BigRational {
        match self {
            ExactQ::Zero => BigRational::from_integer((loops == 1).into()),
            ExactQ::Square(s) => num_traits::pow(s.clone(), loops),
            ExactQ::Infinite => BigRational::from_integer((loops == n + 1).into()),
        }
    }
}

/// Letter weights `(a, b, A, B, F)` at matching proportion `p`.
pub fn exact_weights(p: &BigRational) -> [BigRational; 5] {
    let quarter = BigRational::new(1.into(), 4.into());
    let one_minus = (BigRational::one() - p) * &quarter;
    [
        quarter.clone(),
        quarter,
        one_minus.clone(),
        one_minus,
        p / BigRational::from_integer(2.into()),
    ]
}

fn normalize(mut law: ExactLaw) -> ExactLaw {
    law.retain(|_, w| !w.is_zero());
    let total: BigRational = law.values().sum();
    for w in law.values_mut() {
        *w /= &total;
    }
    law
}

/// Law of the image map when the word is drawn from the conditioned
/// i.i.d. letter law on words of length `2n` with empty reduction.
pub fn pushforward_law(n: usize, q: &ExactQ) -> Result<ExactLaw> {
    let weights = exact_weights(&q.p());
    let mut law = ExactLaw::new();
    for w in enumerate_wn(n)? {
        let weight: BigRational = w.letters().iter().map(|l| weights[l.index()].clone()).product();
        if weight.is_zero() {
            continue;
        }
        let key = CanonicalForm::of_doubly_rooted(&psi(&w)?);
        *law.entry(key).or_insert_with(BigRational::zero) += weight;
    }
    Ok(normalize(law))
}

/// The law proportional to `q^{loops/2}` on doubly rooted maps with `n`
/// edges, built from map enumeration alone.
pub fn loop_weight_law(n: usize, q: &ExactQ) -> Result<ExactLaw> {
    let mut law = ExactLaw::new();
    for sm in enumerate_maps(n)? {
        let loops = loop_count_euler(&sm) as usize;
        let key = CanonicalForm::of_doubly_rooted(&sm);
        *law.entry(key).or_insert_with(BigRational::zero) += q.loop_weight(loops, n);
    }
    Ok(normalize(law))
}

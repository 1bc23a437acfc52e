//! The two world-independent generators: seeded random choice and digit
//! expansion of a fixed number.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::architectures::digits::{self, Constant};
use crate::architectures::ArchitectureError;
use crate::universe::ActId;

/// Act chosen by a seeded PRNG, independently of the world.
///
/// Draw `t` comes from ChaCha stream `t` of `seed`, so any time index can be
/// replayed without generating the ones before it.
#[derive(Debug, Clone, PartialEq)]
pub struct RandomFasa {
    pub seed: u64,
    weights: Option<Vec<f64>>,
    act_count: usize,
}

impl RandomFasa {
    pub fn uniform(seed: u64, act_count: usize) -> Self {
        RandomFasa { seed, weights: None, act_count: act_count.max(1) }
    }

    /// Per-act weights; they must be non-negative and sum to 1 within 1e-9.
    pub fn weighted(seed: u64, weights: Vec<f64>) -> Result<Self, ArchitectureError> {
        let sum: f64 = weights.iter().sum();
        if weights.is_empty() || weights.iter().any(|w| !w.is_finite() || *w < 0.0) || (sum - 1.0).abs() > 1e-9 {
            return Err(ArchitectureError::InvalidWeights);
        }
        Ok(RandomFasa { seed, act_count: weights.len(), weights: Some(weights) })
    }

    pub fn act_count(&self) -> usize {
        self.act_count
    }

    pub fn act_at(&self, t: u64) -> ActId {
        if self.act_count == 1 {
            return ActId(0);
        }
        let mut rng = ChaCha8Rng::seed_from_u64(self.seed);
        rng.set_stream(t);
        match &self.weights {
            None => ActId(rng.gen_range(0..self.act_count) as u32),
            Some(weights) => {
                let u: f64 = rng.gen();
                let mut acc = 0.0;
                for (i, w) in weights.iter().enumerate() {
                    acc += w;
                    if u < acc {
                        return ActId(i as u32);
                    }
                }
                // rounding left a sliver above the last cumulative weight
                let last = weights.iter().rposition(|w| *w > 0.0).unwrap_or(0);
                ActId(last as u32)
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum DigitSource {
    Pi,
    E,
    Explicit(Vec<u32>),
}

/// Act `t` is `act_order[digit_t]`, where `digit_t` is the `t`-th digit of the
/// source written in base `act_order.len()`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PositionalFasa {
    source: DigitSource,
    act_order: Vec<ActId>,
    cache: Vec<u32>,
}

impl PositionalFasa {
    pub fn new(source: DigitSource, act_order: Vec<ActId>) -> Result<Self, ArchitectureError> {
        if act_order.is_empty() {
            return Err(ArchitectureError::EmptyActOrder);
        }
        if let DigitSource::Explicit(digits) = &source {
            if let Some(d) = digits.iter().find(|d| **d as usize >= act_order.len()) {
                return Err(ArchitectureError::DigitOutOfRange { digit: *d, base: act_order.len() as u32 });
            }
        }
        let cache = match &source {
            DigitSource::Explicit(d) => d.clone(),
            _ => Vec::new(),
        };
        Ok(PositionalFasa { source, act_order, cache })
    }

    pub fn source(&self) -> &DigitSource {
        &self.source
    }

    pub fn base(&self) -> u32 {
        self.act_order.len() as u32
    }

    pub fn act_order(&self) -> &[ActId] {
        &self.act_order
    }

    /// Makes sure digits `0..count` are available without recomputation.
    pub fn prefetch(&mut self, count: usize) {
        let constant = match self.source {
            DigitSource::Pi => Constant::Pi,
            DigitSource::E => Constant::E,
            DigitSource::Explicit(_) => return,
        };
        if self.cache.len() < count {
            self.cache = digits::expansion(constant, self.base(), count);
        }
    }

    pub fn act_at(&mut self, t: u64) -> Result<ActId, ArchitectureError> {
        let idx = t as usize;
        if idx >= self.cache.len() {
            if let DigitSource::Explicit(d) = &self.source {
                return Err(ArchitectureError::DigitSourceExhausted { needed: t, available: d.len() });
            }
            self.prefetch((idx + 1).max(2 * self.cache.len()).max(64));
        }
        Ok(self.act_order[self.cache[idx] as usize])
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn single_act_is_always_chosen() {
        let f = RandomFasa::uniform(7, 1);
        assert!((0..50).all(|t| f.act_at(t) == ActId(0)));
    }

    #[test]
    fn same_seed_same_stream() {
        let a = RandomFasa::uniform(42, 4);
        let b = RandomFasa::uniform(42, 4);
        let sa: Vec<_> = (0..200).map(|t| a.act_at(t)).collect();
        let sb: Vec<_> = (0..200).map(|t| b.act_at(t)).collect();
        assert_eq!(sa, sb);
        let c = RandomFasa::uniform(43, 4);
        assert_ne!(sa, (0..200).map(|t| c.act_at(t)).collect::<Vec<_>>());
    }

    #[test]
    fn weights_are_checked() {
        assert!(RandomFasa::weighted(1, vec![0.5, 0.5]).is_ok());
        assert_eq!(RandomFasa::weighted(1, vec![0.5, 0.4]), Err(ArchitectureError::InvalidWeights));
        assert_eq!(RandomFasa::weighted(1, vec![1.5, -0.5]), Err(ArchitectureError::InvalidWeights));
    }

    #[test]
    fn degenerate_weights_pick_the_only_act() {
        let f = RandomFasa::weighted(3, vec![0.0, 1.0, 0.0]).unwrap();
        assert!((0..100).all(|t| f.act_at(t) == ActId(1)));
    }

    #[test]
    fn explicit_zero_digits() {
        let order = vec![ActId(2), ActId(0), ActId(1)];
        let mut f = PositionalFasa::new(DigitSource::Explicit(vec![0, 0, 0]), order).unwrap();
        for t in 0..3 {
            assert_eq!(f.act_at(t).unwrap(), ActId(2));
        }
        assert_eq!(f.act_at(3), Err(ArchitectureError::DigitSourceExhausted { needed: 3, available: 3 }));
    }

    #[test]
    fn pi_base_ten() {
        let order: Vec<ActId> = (0..10).map(ActId).collect();
        let mut f = PositionalFasa::new(DigitSource::Pi, order).unwrap();
        let got: Vec<u32> = (0..5).map(|t| f.act_at(t).unwrap().0).collect();
        assert_eq!(got, vec![3, 1, 4, 1, 5]);
    }

    #[test]
    fn explicit_digit_must_fit_base() {
        assert_eq!(
            PositionalFasa::new(DigitSource::Explicit(vec![0, 2]), vec![ActId(0), ActId(1)]),
            Err(ArchitectureError::DigitOutOfRange { digit: 2, base: 2 })
        );
    }
}

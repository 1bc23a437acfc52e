//! Positional digit expansions of fixed constants in an arbitrary base.
//!
//! The stream starts with the digits of the integer part (so π in base 10
//! reads 3, 1, 4, 1, 5, ...). Values are computed in binary fixed point with
//! guard bits and then re-expanded in the requested base.

use num_bigint::BigUint;
use num_traits::{One, ToPrimitive, Zero};

const GUARD_BITS: u64 = 64;

/// Constants with a built-in expansion.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Constant {
    Pi,
    E,
}

/// Returns the first `count` digits of `constant` written in `base`.
///
/// Base 1 has no positional expansion; every digit is 0.
pub fn expansion(constant: Constant, base: u32, count: usize) -> Vec<u32> {
    if base <= 1 || count == 0 {
        return vec![0; count];
    }
    let integer = match constant {
        Constant::Pi => 3,
        Constant::E => 2,
    };
    let mut out = integer_digits(integer, base);
    out.truncate(count);
    let fractional = count - out.len();
    if fractional == 0 {
        return out;
    }

    let bits = (fractional as f64 * (base as f64).log2()).ceil() as u64 + GUARD_BITS;
    let one = BigUint::one() << bits;
    let scaled = match constant {
        Constant::Pi => pi_fixed(&one),
        Constant::E => e_fixed(&one),
    };
    let mask = &one - 1u32;
    let mut frac = scaled & &mask;
    for _ in 0..fractional {
        frac *= base;
        let digit = (&frac >> bits).to_u32().expect("digit fits in the base");
        out.push(digit);
        frac &= &mask;
    }
    out
}

fn integer_digits(mut value: u64, base: u32) -> Vec<u32> {
    if value == 0 {
        return vec![0];
    }
    let mut digits = Vec::new();
    while value > 0 {
        digits.push((value % base as u64) as u32);
        value /= base as u64;
    }
    digits.reverse();
    digits
}

/// `one / x` arctangent series, truncated at each term.
fn arctan_inverse(x: u32, one: &BigUint) -> BigUint {
    let x2 = BigUint::from(x) * x;
    let mut term = one / x;
    let mut positive = BigUint::zero();
    let mut negative = BigUint::zero();
    let mut k = 0u64;
    while !term.is_zero() {
        let t = &term / (2 * k + 1);
        if k.is_multiple_of(2) {
            positive += t;
        } else {
            negative += t;
        }
        term /= &x2;
        k += 1;
    }
    positive - negative
}

// Machin: π = 16·atan(1/5) − 4·atan(1/239)
fn pi_fixed(one: &BigUint) -> BigUint {
    arctan_inverse(5, one) * 16u32 - arctan_inverse(239, one) * 4u32
}

fn e_fixed(one: &BigUint) -> BigUint {
    let mut sum = BigUint::zero();
    let mut term = one.clone();
    let mut k = 1u32;
    while !term.is_zero() {
        sum += &term;
        term /= k;
        k += 1;
    }
    sum
}

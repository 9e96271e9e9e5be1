//! Dense integer polynomial products by Kronecker substitution: pack both
//! inputs into one big integer each, multiply once, unpack.

use num_bigint::{BigInt, BigUint, Sign};
use num_traits::{Signed, Zero};

fn max_bits(a: &[BigInt]) -> u64 {
    a.iter().map(|c| c.bits()).max().unwrap_or(0)
}

fn pack(a: &[BigInt], w: usize) -> BigInt {
    let mut pos = vec![0u32; a.len() * w];
    let mut neg = vec![0u32; a.len() * w];
    for (i, c) in a.iter().enumerate() {
        let dst = if c.is_negative() { &mut neg } else { &mut pos };
        for (j, d) in c.magnitude().iter_u32_digits().enumerate() {
            dst[i * w + j] = d;
        }
    }
    BigInt::from_biguint(Sign::Plus, BigUint::new(pos))
        - BigInt::from_biguint(Sign::Plus, BigUint::new(neg))
}

/// First `len` coefficients of `a·b`.
pub(crate) fn kron_mul(a: &[BigInt], b: &[BigInt], len: usize) -> Vec<BigInt> {
    let a = &a[..a.len().min(len)];
    let b = &b[..b.len().min(len)];
    if a.is_empty() || b.is_empty() {
        return vec![BigInt::zero(); len];
    }
    let terms = a.len().min(b.len()) as u64;
    let bits = max_bits(a) + max_bits(b) + (64 - terms.leading_zeros() as u64) + 2;
    let w = bits.div_ceil(32) as usize;
    let z = pack(a, w) * pack(b, w);
    let (sign, mag) = z.into_parts();
    let digits = mag.to_u32_digits();
    let half = BigUint::from(1u32) << (32 * w - 1);
    let full = BigUint::from(1u32) << (32 * w);
    let mut out = Vec::with_capacity(len);
    let mut carry = false;
    for i in 0..len {
        let lo = (i * w).min(digits.len());
        let hi = ((i + 1) * w).min(digits.len());
        let mut v = BigUint::from_slice(&digits[lo..hi]);
        if carry {
            v += 1u32;
        }
        let c = if v >= half {
            carry = true;
            -BigInt::from_biguint(Sign::Plus, &full - v)
        } else {
            carry = false;
            BigInt::from_biguint(Sign::Plus, v)
        };
        out.push(if sign == Sign::Minus { -c } else { c });
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn schoolbook(a: &[BigInt], b: &[BigInt], len: usize) -> Vec<BigInt> {
        let mut out = vec![BigInt::zero(); len];
        for (i, x) in a.iter().enumerate() {
            for (j, y) in b.iter().enumerate() {
                if i + j < len {
                    out[i + j] += x * y;
                }
            }
        }
        out
    }

    proptest! {
        #[test]
        fn matches_schoolbook(
            a in prop::collection::vec(any::<i64>(), 1..30),
            b in prop::collection::vec(any::<i64>(), 1..30),
            scale in 0u32..200,
            len in 1usize..70,
        ) {
            let big = BigInt::from(3).pow(scale);
            let a: Vec<BigInt> = a.into_iter().map(|x| &big * x).collect();
            let b: Vec<BigInt> = b.into_iter().map(BigInt::from).collect();
            prop_assert_eq!(kron_mul(&a, &b, len), schoolbook(&a, &b, len));
        }
    }
}

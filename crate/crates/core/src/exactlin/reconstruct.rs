//! Chinese remaindering and rational reconstruction.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use super::Rational;

/// Combines `x mod modulus` with `r mod p` in place; `modulus` is not updated.
/// `inv` must be `modulus^{-1} mod p`.
pub(crate) fn crt_step(x: &mut BigInt, modulus: &BigInt, r: u64, p: u64, inv: u64) {
    let pb = BigInt::from(p);
    let xr: u64 = x.mod_floor(&pb).try_into().expect("residue fits");
    let diff = if r >= xr { r - xr } else { r + p - xr };
    let t = ((diff as u128 * inv as u128) % p as u128) as u64;
    if t != 0 {
        *x += modulus * BigInt::from(t);
    }
}

/// Finds `a/b` with `|a|, b <= bound` and `a ≡ b * u (mod modulus)`, if one exists.
pub fn rational_reconstruct(u: &BigInt, modulus: &BigInt, bound: &BigInt) -> Option<Rational> {
    let u = u.mod_floor(modulus);
    if u <= *bound {
        return Some(Rational::from(u));
    }
    let (mut r0, mut r1) = (modulus.clone(), u);
    let (mut t0, mut t1) = (BigInt::zero(), BigInt::one());
    while r1 > *bound {
        let (q, r2) = r0.div_rem(&r1);
        let t2 = &t0 - &q * &t1;
        r0 = std::mem::replace(&mut r1, r2);
        t0 = std::mem::replace(&mut t1, t2);
    }
    if t1.is_zero() || t1.abs() > *bound {
        return None;
    }
    if !r1.gcd(&t1).is_one() {
        return None;
    }
    Some(Rational::new(r1, t1))
}

/// Reconstructs many residues sharing one modulus, reusing a running common
/// denominator so that most entries reduce to a cheap size test.
pub(crate) struct BatchReconstructor {
    modulus: BigInt,
    half: BigInt,
    bound: BigInt,
    denom: BigInt,
}

impl BatchReconstructor {
    pub fn new(modulus: &BigInt) -> Self {
        let half: BigInt = modulus / 2;
        let bound = half.sqrt();
        BatchReconstructor {
            modulus: modulus.clone(),
            half,
            bound,
            denom: BigInt::one(),
        }
    }

    pub fn reconstruct(&mut self, u: &BigInt) -> Option<Rational> {
        let mut y = (u * &self.denom).mod_floor(&self.modulus);
        if y > self.half {
            y -= &self.modulus;
        }
        if y.abs() <= self.bound {
            return Some(Rational::new(y, self.denom.clone()));
        }
        let r = rational_reconstruct(&y, &self.modulus, &self.bound)?;
        let value = Rational::new(r.numer().clone(), r.denom() * &self.denom);
        self.denom *= r.denom();
        if self.denom > self.bound {
            return None;
        }
        Some(value)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn reconstructs_small_fraction() {
        let m = BigInt::from(1_000_003u64);
        // -7/12 mod m
        let inv12 = BigInt::from(12).modpow(&(&m - 2), &m);
        let u = (BigInt::from(-7) * inv12).mod_floor(&m);
        let bound = (&m / BigInt::from(2)).sqrt();
        assert_eq!(
            rational_reconstruct(&u, &m, &bound).unwrap(),
            Rational::new(-7, 12)
        );
    }

    #[test]
    fn crt_combines_two_primes() {
        let (p, q) = (101u64, 103u64);
        let target = 5000u64;
        let mut x = BigInt::from(target % p);
        let inv = BigInt::from(p)
            .modpow(&BigInt::from(q - 2), &BigInt::from(q))
            .try_into()
            .unwrap();
        crt_step(&mut x, &BigInt::from(p), target % q, q, inv);
        assert_eq!(x, BigInt::from(target));
    }
}

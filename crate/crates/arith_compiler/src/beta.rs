//! Gödel's β function and witnesses for it.

use num_bigint::BigUint;
use num_integer::Integer;
use num_traits::{One, Zero};

/// `β(c, d, i) = c mod (1 + (i + 1) d)`.
pub fn beta(c: &BigUint, d: &BigUint, i: &BigUint) -> BigUint {
    let m = (i + 1u32) * d + 1u32;
    c % m
}

/// A pair `(c, d)` with `β(c, d, i) = seq[i]` for all `i`, by the Chinese
/// remainder theorem: `d` is a multiple of `n!` exceeding every entry, so
/// the moduli `1 + (i+1) d` are pairwise coprime.
pub fn beta_witness(seq: &[BigUint]) -> (BigUint, BigUint) {
    let n = seq.len().max(1);
    let top = seq.iter().max().cloned().unwrap_or_default();
    let mut fact = BigUint::one();
    for k in 2..=n {
        fact *= k as u32;
    }
    // smallest multiple of n! strictly above every entry and above n
    let floor = top.max(BigUint::from(n));
    let d = (&floor / &fact + 1u32) * &fact;
    let mut c = BigUint::zero();
    let mut m = BigUint::one();
    for (i, v) in seq.iter().enumerate() {
        let mi = (&d * (i as u32 + 1)) + 1u32;
        // solve c' = c (mod m), c' = v (mod mi)
        let step = crt_step(&c, &m, v, &mi);
        c = step;
        m *= &mi;
    }
    (c, d)
}

fn crt_step(c: &BigUint, m: &BigUint, v: &BigUint, mi: &BigUint) -> BigUint {
    use num_bigint::BigInt;
    let (c, m, v, mi) = (BigInt::from(c.clone()), BigInt::from(m.clone()), BigInt::from(v.clone()), BigInt::from(mi.clone()));
    // c + m*t = v (mod mi)  =>  t = (v - c) * m^{-1} (mod mi)
    let eg = m.extended_gcd(&mi);
    debug_assert!(eg.gcd.is_one());
    let t = ((&v - &c) * eg.x).mod_floor(&mi);
    let r = c + m * t;
    r.to_biguint().expect("nonnegative")
}

//! Keyed 64-bit hashing shared by the samplers and the recovery coins.

pub(crate) const MERSENNE_61: u64 = (1 << 61) - 1;

pub(crate) fn splitmix(mut x: u64) -> u64 {
    x = x.wrapping_add(0x9E37_79B9_7F4A_7C15);
    x = (x ^ (x >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    x = (x ^ (x >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    x ^ (x >> 31)
}

pub(crate) fn keyed(key: u64, a: u64) -> u64 {
    splitmix(splitmix(key) ^ a.wrapping_mul(0xD6E8_FEB8_6659_FD93))
}

pub(crate) fn keyed2(key: u64, a: u64, b: u64) -> u64 {
    keyed(keyed(key, a), b)
}

/// Uniform in [0, 1) from 53 hash bits.
pub(crate) fn unit(h: u64) -> f64 {
    (h >> 11) as f64 / (1u64 << 53) as f64
}

pub(crate) fn mod_p(x: u64) -> u64 {
    let r = (x & MERSENNE_61) + (x >> 61);
    if r >= MERSENNE_61 {
        r - MERSENNE_61
    } else {
        r
    }
}

pub(crate) fn mul_mod(a: u64, b: u64) -> u64 {
    let prod = a as u128 * b as u128;
    let lo = (prod as u64) & MERSENNE_61;
    let hi = (prod >> 61) as u64;
    mod_p(lo + mod_p(hi))
}

/// `acc + x·h (mod 2^61 − 1)` for a signed integer x.
pub(crate) fn add_signed(acc: u64, x: i64, h: u64) -> u64 {
    let term = mul_mod(mod_p(x.unsigned_abs()), h);
    if x >= 0 {
        mod_p(acc + term)
    } else {
        mod_p(acc + MERSENNE_61 - term)
    }
}

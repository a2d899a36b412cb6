//! Exact integer polynomial squaring by number-theoretic transforms over
//! five word-size primes, recombined with Garner's algorithm.
//!
//! Results are exact as long as every output coefficient is below `2^126`
//! in absolute value; the caller is responsible for that range check.

const MODULI: [u64; 5] = [998_244_353, 167_772_161, 469_762_049, 754_974_721, 2_013_265_921];
const ROOTS: [u64; 5] = [3, 3, 3, 11, 31];
/// Largest transform length supported by every modulus.
pub const MAX_LEN: usize = 1 << 23;

fn pow_mod<const P: u64>(mut b: u64, mut e: u64) -> u64 {
    let mut acc = 1u64;
    b %= P;
    while e > 0 {
        if e & 1 == 1 {
            acc = acc * b % P;
        }
        b = b * b % P;
        e >>= 1;
    }
    acc
}

fn transform<const P: u64>(a: &mut [u64], root: u64, invert: bool) {
    let n = a.len();
    let mut j = 0;
    for i in 1..n {
        let mut bit = n >> 1;
        while j & bit != 0 {
            j ^= bit;
            bit >>= 1;
        }
        j |= bit;
        if i < j {
            a.swap(i, j);
        }
    }
    let mut len = 2;
    while len <= n {
        let mut w = pow_mod::<P>(root, (P - 1) / len as u64);
        if invert {
            w = pow_mod::<P>(w, P - 2);
        }
        let half = len / 2;
        let mut twiddles = Vec::with_capacity(half);
        let mut t = 1u64;
        for _ in 0..half {
            twiddles.push(t);
            t = t * w % P;
        }
        for chunk in a.chunks_mut(len) {
            let (lo, hi) = chunk.split_at_mut(half);
            for ((u, v), &tw) in lo.iter_mut().zip(hi.iter_mut()).zip(&twiddles) {
                let x = *u;
                let y = *v * tw % P;
                *u = if x + y >= P { x + y - P } else { x + y };
                *v = if x >= y { x - y } else { x + P - y };
            }
        }
        len <<= 1;
    }
    if invert {
        let n_inv = pow_mod::<P>(n as u64, P - 2);
        for x in a.iter_mut() {
            *x = *x * n_inv % P;
        }
    }
}

fn square_mod<const P: u64>(a: &[i128], size: usize, out_len: usize, root: u64) -> Vec<u64> {
    let mut buf = vec![0u64; size];
    for (b, &x) in buf.iter_mut().zip(a) {
        *b = x.rem_euclid(P as i128) as u64;
    }
    transform::<P>(&mut buf, root, false);
    for x in buf.iter_mut() {
        *x = *x * *x % P;
    }
    transform::<P>(&mut buf, root, true);
    buf.truncate(out_len);
    buf
}

fn inv_mod(a: u64, m: u64) -> u64 {
    // m is prime
    let mut acc = 1u128;
    let mut b = (a % m) as u128;
    let mut e = m - 2;
    let m128 = m as u128;
    while e > 0 {
        if e & 1 == 1 {
            acc = acc * b % m128;
        }
        b = b * b % m128;
        e >>= 1;
    }
    acc as u64
}

/// Mixed-radix reconstruction constants.
struct Garner {
    // moduli_mod[i][k] = MODULI[k] mod MODULI[i]
    moduli_mod: [[u64; 5]; 5],
    // inverse of MODULI[0] * .. * MODULI[i-1] mod MODULI[i]
    inv_prefix: [u64; 5],
}

impl Garner {
    fn new() -> Self {
        let mut moduli_mod = [[0u64; 5]; 5];
        let mut inv_prefix = [1u64; 5];
        for i in 0..5 {
            let m = MODULI[i];
            let mut prefix = 1u64;
            for k in 0..5 {
                moduli_mod[i][k] = MODULI[k] % m;
                if k < i {
                    prefix = prefix * moduli_mod[i][k] % m;
                }
            }
            inv_prefix[i] = inv_mod(prefix, m);
        }
        Garner { moduli_mod, inv_prefix }
    }

    /// Signed integer from its residues, assuming `|value| < 2^126`.
    fn reconstruct(&self, residues: [u64; 5]) -> i128 {
        let mut digits = [0u64; 5];
        for i in 0..5 {
            let m = MODULI[i];
            // partial mixed-radix sum reduced mod m
            let mut partial = 0u64;
            let mut radix = 1u64;
            for k in 0..i {
                partial = (partial + digits[k] % m * radix) % m;
                radix = radix * self.moduli_mod[i][k] % m;
            }
            let diff = (residues[i] + m - partial) % m;
            digits[i] = diff * self.inv_prefix[i] % m;
        }
        let mut sum = 0u128;
        let mut radix = 1u128;
        for i in 0..5 {
            sum = sum.wrapping_add((digits[i] as u128).wrapping_mul(radix));
            radix = radix.wrapping_mul(MODULI[i] as u128);
        }
        // radix is now the modulus product reduced mod 2^128
        if digits[4] > MODULI[4] / 2 {
            sum.wrapping_sub(radix) as i128
        } else {
            sum as i128
        }
    }
}

/// First `out_len` coefficients of `a(q)^2`.
pub fn square_truncated(a: &[i128], out_len: usize) -> Vec<i128> {
    if a.is_empty() || out_len == 0 {
        return vec![0; out_len];
    }
    let size = (2 * a.len() - 1).next_power_of_two();
    assert!(size <= MAX_LEN, "transform length {size} exceeds {MAX_LEN}");
    let keep = out_len.min(2 * a.len() - 1);
    let r0 = square_mod::<{ MODULI[0] }>(a, size, keep, ROOTS[0]);
    let r1 = square_mod::<{ MODULI[1] }>(a, size, keep, ROOTS[1]);
    let r2 = square_mod::<{ MODULI[2] }>(a, size, keep, ROOTS[2]);
    let r3 = square_mod::<{ MODULI[3] }>(a, size, keep, ROOTS[3]);
    let r4 = square_mod::<{ MODULI[4] }>(a, size, keep, ROOTS[4]);
    let g = Garner::new();
    let mut out: Vec<i128> = (0..keep)
        .map(|i| g.reconstruct([r0[i], r1[i], r2[i], r3[i], r4[i]]))
        .collect();
    out.resize(out_len, 0);
    out
}

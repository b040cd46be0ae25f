//! Multi-prime NTT multiplication of integer polynomials reduced mod an
//! arbitrary modulus below 2^63, with Garner recombination.

use crate::padic::{addm, invm, mulm, powm, subm};

struct NttPrime {
    p: u64,
    root: u64,
    two_adicity: u32,
}

const PRIMES: [NttPrime; 6] = [
    NttPrime {
        p: 2113929217,
        root: 5,
        two_adicity: 25,
    },
    NttPrime {
        p: 2013265921,
        root: 31,
        two_adicity: 27,
    },
    NttPrime {
        p: 1811939329,
        root: 13,
        two_adicity: 26,
    },
    NttPrime {
        p: 998244353,
        root: 3,
        two_adicity: 23,
    },
    NttPrime {
        p: 754974721,
        root: 11,
        two_adicity: 24,
    },
    NttPrime {
        p: 469762049,
        root: 3,
        two_adicity: 26,
    },
];

fn transform(a: &mut [u64], invert: bool, prime: &NttPrime) {
    let n = a.len();
    let p = prime.p;
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
    let mut twiddles = vec![0u64; n / 2];
    let mut len = 2;
    while len <= n {
        let mut w = powm(prime.root, (p - 1) / len as u64, p);
        if invert {
            w = invm(w, p).expect("prime modulus");
        }
        let half = len / 2;
        twiddles[0] = 1;
        for k in 1..half {
            twiddles[k] = twiddles[k - 1] * w % p;
        }
        for start in (0..n).step_by(len) {
            for k in 0..half {
                let u = a[start + k];
                let v = a[start + k + half] * twiddles[k] % p;
                a[start + k] = addm(u, v, p);
                a[start + k + half] = subm(u, v, p);
            }
        }
        len <<= 1;
    }
    if invert {
        let ninv = invm(n as u64, p).expect("prime modulus");
        for x in a.iter_mut() {
            *x = *x * ninv % p;
        }
    }
}

fn convolve_mod_prime(a: &[u64], b: &[u64], size: usize, prime: &NttPrime) -> Vec<u64> {
    let p = prime.p;
    let mut fa = vec![0u64; size];
    let mut fb = vec![0u64; size];
    for (i, x) in a.iter().enumerate() {
        fa[i] = x % p;
    }
    for (i, x) in b.iter().enumerate() {
        fb[i] = x % p;
    }
    transform(&mut fa, false, prime);
    transform(&mut fb, false, prime);
    for i in 0..size {
        fa[i] = fa[i] * fb[i] % p;
    }
    transform(&mut fa, true, prime);
    fa
}

/// Full product of `a` and `b` (entries in `[0, m)`) reduced mod `m`.
///
/// Returns `None` when the exact integer coefficients would need more than the
/// available primes, or the transform length exceeds their 2-adic order.
pub fn multiply(a: &[u64], b: &[u64], m: u64) -> Option<Vec<u64>> {
    if a.is_empty() || b.is_empty() {
        return Some(vec![]);
    }
    let out_len = a.len() + b.len() - 1;
    let size = out_len.next_power_of_two();
    let log_size = size.trailing_zeros();
    let bound_bits = (a.len().min(b.len()) as f64).log2() + 2.0 * ((m.max(2) - 1) as f64).log2() + 1.0;
    let mut count = 0;
    let mut bits = 0.0;
    while bits <= bound_bits {
        if count == PRIMES.len() {
            return None;
        }
        bits += (PRIMES[count].p as f64).log2();
        count += 1;
    }
    if PRIMES[..count].iter().any(|q| q.two_adicity < log_size) {
        return None;
    }
    let residues: Vec<Vec<u64>> = PRIMES[..count]
        .iter()
        .map(|q| convolve_mod_prime(a, b, size, q))
        .collect();
    // inv[j][l] = p_l^{-1} mod p_j
    let mut inv = [[0u64; 6]; 6];
    for j in 0..count {
        for l in 0..j {
            inv[j][l] = invm(PRIMES[l].p % PRIMES[j].p, PRIMES[j].p).expect("distinct primes");
        }
    }
    let mut out = vec![0u64; out_len];
    let mut mixed = [0u64; 6];
    for (i, slot) in out.iter_mut().enumerate() {
        for j in 0..count {
            let pj = PRIMES[j].p;
            let mut t = residues[j][i];
            for l in 0..j {
                t = subm(t, mixed[l] % pj, pj);
                t = t * inv[j][l] % pj;
            }
            mixed[j] = t;
        }
        let mut acc = mixed[count - 1] % m;
        for j in (0..count - 1).rev() {
            acc = addm(mulm(acc, PRIMES[j].p % m, m), mixed[j] % m, m);
        }
        *slot = acc;
    }
    Some(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};

    fn schoolbook(a: &[u64], b: &[u64], m: u64) -> Vec<u64> {
        let mut r = vec![0u64; a.len() + b.len() - 1];
        for (i, x) in a.iter().enumerate() {
            for (j, y) in b.iter().enumerate() {
                r[i + j] = addm(r[i + j], mulm(*x, *y, m), m);
            }
        }
        r
    }

    #[test]
    fn matches_schoolbook() {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(3);
        for m in [7u64, 361, 5u64.pow(10), 7u64.pow(20), (1u64 << 62) + 1] {
            for (la, lb) in [(1, 1), (3, 70), (129, 200), (300, 300)] {
                let a: Vec<u64> = (0..la).map(|_| rng.gen_range(0..m)).collect();
                let b: Vec<u64> = (0..lb).map(|_| rng.gen_range(0..m)).collect();
                match multiply(&a, &b, m) {
                    Some(r) => assert_eq!(r, schoolbook(&a, &b, m), "m={m} la={la}"),
                    None => assert!(m > 1 << 60),
                }
            }
        }
    }

    #[test]
    fn primes_have_claimed_structure() {
        for q in PRIMES.iter() {
            assert!(crate::padic::is_prime(q.p));
            assert_eq!((q.p - 1) % (1 << q.two_adicity), 0);
            // root generates the full multiplicative group
            let mut n = q.p - 1;
            let mut f = 2;
            while f * f <= n {
                if n % f == 0 {
                    assert_ne!(powm(q.root, (q.p - 1) / f, q.p), 1);
                    while n % f == 0 {
                        n /= f;
                    }
                }
                f += 1;
            }
            if n > 1 {
                assert_ne!(powm(q.root, (q.p - 1) / n, q.p), 1);
            }
        }
    }
}

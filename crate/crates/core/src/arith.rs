//! Small integer helpers: primes, factorizations, gcd/lcm.

pub fn gcd(mut a: usize, mut b: usize) -> usize {
    while b != 0 {
        let t = a % b;
        a = b;
        b = t;
    }
    a
}

pub fn lcm(a: usize, b: usize) -> usize {
    if a == 0 || b == 0 {
        0
    } else {
        a / gcd(a, b) * b
    }
}

pub fn is_prime(n: usize) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2;
    while d * d <= n {
        if n.is_multiple_of(d) {
            return false;
        }
        d += 1;
    }
    true
}

/// Prime factorization as `(prime, exponent)` pairs in increasing prime order.
pub fn factorize(mut n: usize) -> Vec<(usize, u32)> {
    let mut out = Vec::new();
    let mut d = 2;
    while d * d <= n {
        if n.is_multiple_of(d) {
            let mut e = 0;
            while n.is_multiple_of(d) {
                n /= d;
                e += 1;
            }
            out.push((d, e));
        }
        d += 1;
    }
    if n > 1 {
        out.push((n, 1));
    }
    out
}

/// The set of prime divisors, increasing.
pub fn prime_divisors(n: usize) -> Vec<usize> {
    factorize(n).into_iter().map(|(p, _)| p).collect()
}

/// Largest divisor of `n` whose prime divisors all lie in `primes`.
pub fn pi_part(n: usize, primes: &[usize]) -> usize {
    factorize(n)
        .into_iter()
        .filter(|(p, _)| primes.contains(p))
        .map(|(p, e)| p.pow(e))
        .product()
}

pub fn p_part(n: usize, p: usize) -> usize {
    pi_part(n, &[p])
}

/// Returns `Some(p)` if `n = p^a` for a prime `p` and `a >= 1`.
pub fn prime_power_base(n: usize) -> Option<usize> {
    match factorize(n).as_slice() {
        [(p, _)] => Some(*p),
        _ => None,
    }
}

pub fn is_square_free(n: usize) -> bool {
    factorize(n).iter().all(|&(_, e)| e == 1)
}

pub fn pow_mod(base: usize, mut exp: usize, m: usize) -> usize {
    if m == 1 {
        return 0;
    }
    let mut result = 1 % m;
    let mut b = base % m;
    while exp > 0 {
        if exp & 1 == 1 {
            result = result * b % m;
        }
        b = b * b % m;
        exp >>= 1;
    }
    result
}

/// Smallest-prime-factor table for `2..=bound`.
#[derive(Clone, Debug)]
pub struct FactorSieve {
    smallest_factor: Vec<u32>,
}

impl FactorSieve {
    pub fn new(bound: u64) -> Self {
        let len = bound.max(1) as usize + 1;
        let mut smallest_factor = vec![0u32; len];
        let mut primes: Vec<u32> = Vec::new();
        // linear sieve: each composite is struck once, by its least prime
        for i in 2..len {
            if smallest_factor[i] == 0 {
                smallest_factor[i] = i as u32;
                primes.push(i as u32);
            }
            let lpf = smallest_factor[i];
            for &p in &primes {
                if p > lpf || i * p as usize >= len {
                    break;
                }
                smallest_factor[i * p as usize] = p;
            }
        }
        FactorSieve { smallest_factor }
    }

    pub fn bound(&self) -> u64 {
        self.smallest_factor.len() as u64 - 1
    }

    pub fn smallest_factor(&self, n: u64) -> Option<u64> {
        match self.smallest_factor.get(n as usize) {
            Some(&p) if p != 0 => Some(p as u64),
            _ => None,
        }
    }

    pub fn is_prime(&self, n: u64) -> bool {
        self.smallest_factor(n) == Some(n)
    }

    /// `(p, e)` pairs in ascending `p`; empty for `n = 1`.
    ///
    /// Panics if `n` is zero or above the sieve bound.
    pub fn factorize(&self, mut n: u64) -> Vec<(u64, u32)> {
        assert!(n >= 1 && n <= self.bound(), "{n} outside sieve range");
        let mut out: Vec<(u64, u32)> = Vec::new();
        while n > 1 {
            let p = self.smallest_factor[n as usize] as u64;
            let mut e = 0;
            while n.is_multiple_of(p) {
                n /= p;
                e += 1;
            }
            out.push((p, e));
        }
        out
    }

    /// The prime-power parts `p^e` of `n`.
    pub fn prime_power_parts(&self, n: u64) -> Vec<u64> {
        self.factorize(n)
            .into_iter()
            .map(|(p, e)| p.pow(e))
            .collect()
    }

    pub fn is_prime_power(&self, n: u64) -> bool {
        n >= 2 && self.factorize(n).len() == 1
    }

    pub fn prime_powers(&self) -> impl Iterator<Item = u64> + '_ {
        (2..=self.bound()).filter(|&n| self.is_prime_power(n))
    }
}

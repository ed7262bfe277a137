//! Mixed-radix Cooley–Tukey transform for arbitrary lengths.
//!
//! Lengths factor by their smallest prime at each level; prime lengths fall
//! back to a direct sum. Unnormalized in both directions.

use alloc::vec;
use alloc::vec::Vec;
use core::f64::consts::PI;

use num_complex::Complex64;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub(crate) enum Direction {
    /// Kernel `e^{-j2π kn/N}`.
    Forward,
    /// Kernel `e^{+j2π kn/N}`, no `1/N`.
    Inverse,
}

pub(crate) struct Fft {
    len: usize,
    /// `e^{±j2π i/len}` for `i in 0..len`.
    roots: Vec<Complex64>,
    /// Radices applied in order; their product is `len`.
    factors: Vec<usize>,
    /// Row-major `p × p` DFT matrix per stage; empty for radices 2 and 4.
    kernels: Vec<Vec<Complex64>>,
    /// Multiplication by `e^{±jπ/2}`, the radix-4 rotation.
    quarter: fn(Complex64) -> Complex64,
}

/// Odd radices first so that zero-padding pruning in the first stage hits
/// the expensive generic butterflies; then 2 and 4 with exact rotations.
fn factorize(mut n: usize) -> Vec<usize> {
    let mut odd = Vec::new();
    let mut p = 3;
    while n > 1 && p * p <= n {
        while n.is_multiple_of(p) {
            odd.push(p);
            n /= p;
        }
        p += 2;
    }
    let mut even = Vec::new();
    while n.is_multiple_of(4) {
        even.push(4);
        n /= 4;
    }
    if n.is_multiple_of(2) {
        even.push(2);
        n /= 2;
    }
    if n > 1 {
        odd.push(n);
    }
    odd.extend(even);
    odd
}

impl Fft {
    pub(crate) fn new(len: usize, direction: Direction) -> Self {
        let (sign, quarter): (f64, fn(Complex64) -> Complex64) = match direction {
            Direction::Forward => (-1.0, |z| Complex64::new(z.im, -z.re)),
            Direction::Inverse => (1.0, |z| Complex64::new(-z.im, z.re)),
        };
        let roots: Vec<Complex64> = (0..len)
            .map(|i| Complex64::from_polar(1.0, sign * 2.0 * PI * i as f64 / len as f64))
            .collect();
        let factors = factorize(len);
        let kernels = factors
            .iter()
            .map(|&p| match p {
                2 | 4 => Vec::new(),
                _ => (0..p * p)
                    .map(|i| roots[((i / p) * (i % p) % p) * (len / p)])
                    .collect(),
            })
            .collect();
        Self {
            len,
            roots,
            factors,
            kernels,
            quarter,
        }
    }

    pub(crate) fn len(&self) -> usize {
        self.len
    }

    /// Transforms `input` zero-padded (or truncated) to the plan length.
    pub(crate) fn process(&self, input: &[Complex64]) -> Vec<Complex64> {
        let zero = Complex64::new(0.0, 0.0);
        let mut x = vec![zero; self.len];
        let mut y = vec![zero; self.len];
        let mut used = input.len().min(self.len);
        x[..used].copy_from_slice(&input[..used]);

        // Stockham decimation in frequency: each stage reads `x` and writes
        // `y` in the order the next stage expects, then the buffers swap.
        let mut n = self.len;
        let mut s = 1;
        let mut sums = Vec::new();
        let mut inputs = Vec::new();
        for (&p, kernel) in self.factors.iter().zip(&self.kernels) {
            let m = n / p;
            let step_n = self.len / n;
            let roots = &self.roots;
            let tw = |q: usize, j: usize| roots[q * j * step_n];
            for q in 0..m {
                for k in 0..s {
                    let at = |r: usize| x[k + s * (q + r * m)];
                    let out = k + s * p * q;
                    match p {
                        2 => {
                            let (a, b) = (at(0), at(1));
                            y[out] = a + b;
                            y[out + s] = (a - b) * tw(q, 1);
                        }
                        4 => {
                            let (a0, a1, a2, a3) = (at(0), at(1), at(2), at(3));
                            let (t0, t1) = (a0 + a2, a0 - a2);
                            let (t2, t3) = (a1 + a3, (self.quarter)(a1 - a3));
                            y[out] = t0 + t2;
                            y[out + s] = (t1 + t3) * tw(q, 1);
                            y[out + 2 * s] = (t0 - t2) * tw(q, 2);
                            y[out + 3 * s] = (t1 - t3) * tw(q, 3);
                        }
                        _ => {
                            // Inputs past `used` are known zeros (first stage only).
                            let live = if q >= used {
                                0
                            } else {
                                ((used - q - 1) / m + 1).min(p)
                            };
                            sums.clear();
                            inputs.clear();
                            inputs.extend((0..live).map(at));
                            for j in 0..p {
                                let acc: Complex64 = inputs
                                    .iter()
                                    .enumerate()
                                    .map(|(r, a)| a * kernel[r * p + j])
                                    .sum();
                                sums.push(acc * tw(q, j));
                            }
                            for (j, v) in sums.iter().enumerate() {
                                y[out + j * s] = *v;
                            }
                        }
                    }
                }
            }
            core::mem::swap(&mut x, &mut y);
            n = m;
            s *= p;
            used = self.len;
        }
        x
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn naive(x: &[Complex64], len: usize, sign: f64) -> Vec<Complex64> {
        (0..len)
            .map(|k| {
                x.iter()
                    .enumerate()
                    .map(|(i, v)| {
                        v * Complex64::from_polar(
                            1.0,
                            sign * 2.0 * PI * (i * k) as f64 / len as f64,
                        )
                    })
                    .sum()
            })
            .collect()
    }

    #[test]
    fn matches_direct_sum() {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        for (input_len, len) in [
            (1, 1),
            (7, 7),
            (12, 12),
            (100, 400),
            (50, 200),
            (30, 97),
            (9, 60),
            (5, 45),
            (3, 8),
        ] {
            let x: Vec<Complex64> = (0..input_len)
                .map(|_| Complex64::new(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0)))
                .collect();
            for (dir, sign) in [(Direction::Forward, -1.0), (Direction::Inverse, 1.0)] {
                let got = Fft::new(len, dir).process(&x);
                let want = naive(&x, len, sign);
                for (a, b) in got.iter().zip(&want) {
                    assert!((a - b).norm() < 1e-10, "len {len}: {a} vs {b}");
                }
            }
        }
    }
}

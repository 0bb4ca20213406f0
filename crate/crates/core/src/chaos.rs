//! Discrete fractional chaotic map and the permutations derived from it.
//!
//! The orbit follows
//!
//! ```text
//! x(n+1) = x(0) + 1/Γ(ν) · Σ_{j=0..=n} Γ(n-j+ν)/Γ(n-j+1) · g(j, x(j))
//! ```
//!
//! with the logistic-form nonlinearity `g(j, x) = gain·f·(1-f) - f`, where
//! `f` is the fractional part of `|x|`. At `ν = 1` every kernel weight is 1
//! and the fractional parts follow the ordinary logistic map.
//!
//! A permutation of order `n` reads the orbit from `x(1)` on and turns each
//! value into the candidate `⌊frac(x(i))·10¹⁴⌋ mod n`, skipping candidates it
//! has already taken.

use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

use crate::error::{Error, Result};
use crate::keyschedule::{KeyChunk, CHUNK_BITS};

pub const DEFAULT_GAIN: f64 = 3.9;
/// Multiplier applied to orbit values before reduction modulo the order.
pub const CANDIDATE_SCALE: f64 = 1e14;
/// Orbit steps allowed per permutation element before giving up.
pub const STEPS_PER_ELEMENT: usize = 64;

/// Initial condition, fractional order and gain. These are secrets, so
/// `Debug` does not print them.
#[derive(Clone, Copy, PartialEq)]
pub struct FractionalMapParams {
    x0: f64,
    nu: f64,
    gain: f64,
}

impl FractionalMapParams {
    pub fn new(x0: f64, nu: f64, gain: f64) -> Result<Self> {
        if !(x0.is_finite() && x0 > 0.0 && x0 < 1.0) {
            return Err(Error::MapParams("x0 must lie in (0, 1)"));
        }
        if !(nu.is_finite() && nu > 0.0 && nu <= 1.0) {
            return Err(Error::MapParams("fractional order must lie in (0, 1]"));
        }
        if !(gain.is_finite() && gain > 0.0 && gain <= 4.0) {
            return Err(Error::MapParams("gain must lie in (0, 4]"));
        }
        Ok(Self { x0, nu, gain })
    }

    pub fn with_default_gain(x0: f64, nu: f64) -> Result<Self> {
        Self::new(x0, nu, DEFAULT_GAIN)
    }

    pub fn x0(&self) -> f64 {
        self.x0
    }

    pub fn nu(&self) -> f64 {
        self.nu
    }

    pub fn gain(&self) -> f64 {
        self.gain
    }
}

impl fmt::Debug for FractionalMapParams {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("FractionalMapParams(<redacted>)")
    }
}

/// Fractional part of `|x|`, in `[0, 1)`.
pub fn frac(x: f64) -> f64 {
    let a = libm::fabs(x);
    a - libm::floor(a)
}

/// `g(j, x)`. Independent of `j`; kept as the single place to swap in a
/// different nonlinearity.
pub fn nonlinearity(gain: f64, x: f64) -> f64 {
    let f = frac(x);
    gain * f * (1.0 - f) - f
}

/// Memory kernel `Γ(k+ν)/Γ(k+1)`, evaluated through log-gamma so it stays
/// finite for long orbits.
pub fn kernel_weight(k: usize, nu: f64) -> f64 {
    let k = k as f64;
    libm::exp(libm::lgamma(k + nu) - libm::lgamma(k + 1.0))
}

/// Candidate index produced by one orbit value.
pub fn candidate_index(value: f64, order: usize) -> usize {
    let scaled = libm::floor(frac(value) * CANDIDATE_SCALE) as u64;
    (scaled % order as u64) as usize
}

/// Lazily extended orbit of the map. Values are memoised, so permutations of
/// several orders can be read from one instance without recomputation.
#[derive(Clone)]
pub struct FractionalMap {
    params: FractionalMapParams,
    gamma_nu: f64,
    weights: Vec<f64>,
    forcing: Vec<f64>,
    values: Vec<f64>,
}

impl fmt::Debug for FractionalMap {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("FractionalMap")
            .field("steps", &self.values.len())
            .finish_non_exhaustive()
    }
}

impl FractionalMap {
    pub fn new(params: FractionalMapParams) -> Self {
        Self {
            params,
            gamma_nu: libm::tgamma(params.nu),
            weights: Vec::new(),
            forcing: vec![nonlinearity(params.gain, params.x0)],
            values: Vec::new(),
        }
    }

    pub fn params(&self) -> &FractionalMapParams {
        &self.params
    }

    /// `frac(x(i))` for `i >= 1`.
    pub fn value(&mut self, i: usize) -> Result<f64> {
        assert!(i >= 1, "orbit values are indexed from 1");
        while self.values.len() < i {
            self.step()?;
        }
        Ok(self.values[i - 1])
    }

    fn step(&mut self) -> Result<()> {
        let n = self.forcing.len() - 1;
        while self.weights.len() <= n {
            self.weights.push(kernel_weight(self.weights.len(), self.params.nu));
        }
        let mut sum = 0.0;
        for j in 0..=n {
            sum += self.weights[n - j] * self.forcing[j];
        }
        let x = self.params.x0 + sum / self.gamma_nu;
        if !x.is_finite() {
            return Err(Error::NonFinite { index: n + 1 });
        }
        self.forcing.push(nonlinearity(self.params.gain, x));
        self.values.push(frac(x));
        Ok(())
    }
}

/// `frac(x(1)), …, frac(x(count))`.
pub fn fractional_map_sequence(params: &FractionalMapParams, count: usize) -> Result<Vec<f64>> {
    if count == 0 {
        return Err(Error::MapParams("sequence length must be positive"));
    }
    let mut map = FractionalMap::new(*params);
    (1..=count).map(|i| map.value(i)).collect()
}

/// A bijection on `{0, …, n-1}`.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Permutation(Vec<usize>);

impl Permutation {
    pub fn order(&self) -> usize {
        self.0.len()
    }

    pub fn as_slice(&self) -> &[usize] {
        &self.0
    }

    pub fn into_vec(self) -> Vec<usize> {
        self.0
    }
}

pub fn chaotic_permutation(params: &FractionalMapParams, order: usize) -> Result<Permutation> {
    permutation_from_map(&mut FractionalMap::new(*params), order)
}

/// Reads candidates from the start of `map`'s orbit until `order` distinct
/// indices have been seen.
pub fn permutation_from_map(map: &mut FractionalMap, order: usize) -> Result<Permutation> {
    if order == 0 {
        return Err(Error::MapParams("permutation order must be positive"));
    }
    let limit = STEPS_PER_ELEMENT * order;
    let mut taken = vec![false; order];
    let mut values = Vec::with_capacity(order);
    for i in 1..=limit {
        let idx = candidate_index(map.value(i)?, order);
        if !taken[idx] {
            taken[idx] = true;
            values.push(idx);
            if values.len() == order {
                return Ok(Permutation(values));
            }
        }
    }
    Err(Error::DegenerateMap {
        order,
        iterations: limit,
    })
}

/// The 64 coefficient positions of one chunk, in embedding order.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub struct PositionList([u8; CHUNK_BITS]);

impl PositionList {
    pub fn as_slice(&self) -> &[u8] {
        &self.0
    }

    pub fn iter(&self) -> impl Iterator<Item = usize> + '_ {
        self.0.iter().map(|&p| usize::from(p))
    }
}

/// Derives per-chunk positions, caching the base permutation of order 64
/// and the orbit behind it.
#[derive(Clone, Debug)]
pub struct PositionGenerator {
    map: FractionalMap,
    base: PositionList,
}

impl PositionGenerator {
    pub fn new(params: FractionalMapParams) -> Result<Self> {
        let mut map = FractionalMap::new(params);
        let perm = permutation_from_map(&mut map, CHUNK_BITS)?;
        let mut base = [0u8; CHUNK_BITS];
        for (b, &p) in base.iter_mut().zip(perm.as_slice()) {
            *b = p as u8;
        }
        Ok(Self {
            map,
            base: PositionList(base),
        })
    }

    /// The base permutation of the 64 positions.
    pub fn base(&self) -> &PositionList {
        &self.base
    }

    /// Base entries whose key bit is set come first, in base order; the rest
    /// are shuffled by a chaotic permutation of their own count.
    pub fn positions(&mut self, chunk: KeyChunk) -> Result<PositionList> {
        let mut out = [0u8; CHUNK_BITS];
        let mut rest = [0u8; CHUNK_BITS];
        let (mut taken, mut left) = (0, 0);
        for (j, &p) in self.base.0.iter().enumerate() {
            if chunk.bit(j) {
                out[taken] = p;
                taken += 1;
            } else {
                rest[left] = p;
                left += 1;
            }
        }
        if left > 0 {
            let perm = permutation_from_map(&mut self.map, left)?;
            for (o, &p) in out[taken..].iter_mut().zip(perm.as_slice()) {
                *o = rest[p];
            }
        }
        Ok(PositionList(out))
    }
}

pub fn chaotic_positions(chunk: KeyChunk, params: &FractionalMapParams) -> Result<PositionList> {
    PositionGenerator::new(*params)?.positions(chunk)
}

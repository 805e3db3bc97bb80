//! Standard distance-regular families used as the test corpus.

use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::graph::Graph;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Family {
    Hypercube,
    Hamming,
    Johnson,
    Cycle,
}

impl Family {
    pub fn tag(self) -> &'static str {
        match self {
            Family::Hypercube => "hypercube",
            Family::Hamming => "hamming",
            Family::Johnson => "johnson",
            Family::Cycle => "cycle",
        }
    }
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.tag())
    }
}

impl FromStr for Family {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "hypercube" => Ok(Family::Hypercube),
            "hamming" => Ok(Family::Hamming),
            "johnson" => Ok(Family::Johnson),
            "cycle" => Ok(Family::Cycle),
            other => Err(Error::UnknownFamily(other.to_string())),
        }
    }
}

/// A family tag plus its integer parameters, e.g. `hamming:3,3`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct NamedGraph {
    pub family: Family,
    pub params: Vec<usize>,
}

impl NamedGraph {
    pub fn new(family: Family, params: &[usize]) -> Self {
        NamedGraph { family, params: params.to_vec() }
    }

    pub fn build(&self) -> Result<Graph> {
        build_named(self.family, &self.params)
    }
}

impl fmt::Display for NamedGraph {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let params: Vec<String> = self.params.iter().map(|p| p.to_string()).collect();
        write!(f, "{}:{}", self.family, params.join(","))
    }
}

impl FromStr for NamedGraph {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let (tag, rest) = s.split_once(':').unwrap_or((s, ""));
        let family: Family = tag.trim().parse()?;
        let params = rest
            .split(',')
            .filter(|p| !p.trim().is_empty())
            .map(|p| {
                p.trim().parse::<usize>().map_err(|_| Error::InvalidParameters {
                    family: family.to_string(),
                    reason: format!("`{p}` is not a non-negative integer"),
                })
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(NamedGraph { family, params })
    }
}

fn invalid(family: Family, reason: impl Into<String>) -> Error {
    Error::InvalidParameters { family: family.to_string(), reason: reason.into() }
}

fn expect_params<const N: usize>(family: Family, params: &[usize]) -> Result<[usize; N]> {
    params
        .try_into()
        .map_err(|_| invalid(family, format!("expected {N} parameter(s), got {}", params.len())))
}

/// Builds the standard graph of a family. Every family is restricted to
/// diameter at least 3.
pub fn build_named(family: Family, params: &[usize]) -> Result<Graph> {
    match family {
        Family::Hypercube => {
            let [d] = expect_params(family, params)?;
            if d < 3 {
                return Err(invalid(family, "dimension must be at least 3"));
            }
            hamming(d, 2)
        }
        Family::Hamming => {
            let [d, q] = expect_params(family, params)?;
            if d < 3 || q < 2 {
                return Err(invalid(family, "need d >= 3 and q >= 2"));
            }
            hamming(d, q)
        }
        Family::Johnson => {
            let [n, k] = expect_params(family, params)?;
            if k > n || k.min(n - k) < 3 {
                return Err(invalid(family, "need min(k, n-k) >= 3"));
            }
            if n > 63 {
                return Err(invalid(family, "ground set larger than 63"));
            }
            johnson(n, k)
        }
        Family::Cycle => {
            let [n] = expect_params(family, params)?;
            if n < 6 {
                return Err(invalid(family, "need n >= 6"));
            }
            let neighbors = (0..n).map(|i| sorted(vec![(i + 1) % n, (i + n - 1) % n])).collect();
            Graph::from_neighbors(neighbors)
        }
    }
}

fn sorted(mut v: Vec<usize>) -> Vec<usize> {
    v.sort_unstable();
    v
}

fn hamming(d: usize, q: usize) -> Result<Graph> {
    let n = q
        .checked_pow(d as u32)
        .filter(|&n| n <= crate::graph::DEFAULT_VERTEX_CAP)
        .ok_or(Error::TooLarge { n: usize::MAX, cap: crate::graph::DEFAULT_VERTEX_CAP })?;
    // word w has digit (w / q^c) % q in coordinate c
    let neighbors = (0..n)
        .map(|w| {
            let mut out = Vec::with_capacity(d * (q - 1));
            let mut place = 1;
            for _ in 0..d {
                let digit = (w / place) % q;
                for other in 0..q {
                    if other != digit {
                        out.push(w - digit * place + other * place);
                    }
                }
                place *= q;
            }
            sorted(out)
        })
        .collect();
    Graph::from_neighbors(neighbors)
}

fn johnson(n: usize, k: usize) -> Result<Graph> {
    let subsets: Vec<u64> = (0u64..1 << n).filter(|s| s.count_ones() as usize == k).collect();
    if subsets.len() > crate::graph::DEFAULT_VERTEX_CAP {
        return Err(Error::TooLarge { n: subsets.len(), cap: crate::graph::DEFAULT_VERTEX_CAP });
    }
    let neighbors = subsets
        .iter()
        .map(|&s| {
            subsets
                .iter()
                .enumerate()
                .filter(|&(_, &t)| (s & t).count_ones() as usize == k - 1)
                .map(|(idx, _)| idx)
                .collect()
        })
        .collect();
    Graph::from_neighbors(neighbors)
}

use std::fmt;

use crate::error::{Error, Result};

/// The power series ring `k[[x_1, ..., x_d]]`, `d >= 2`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MonomialRing {
    variables: Vec<String>,
}

impl MonomialRing {
    pub fn new<S: AsRef<str>>(variables: &[S]) -> Result<Self> {
        let variables: Vec<String> = variables.iter().map(|v| v.as_ref().to_string()).collect();
        if variables.len() < 2 {
            return Err(Error::InvalidRing(
                "power series rings need at least two variables; use a semigroup ring for d = 1"
                    .into(),
            ));
        }
        for (i, v) in variables.iter().enumerate() {
            if variables[..i].contains(v) {
                return Err(Error::InvalidRing(format!("variable {v} declared twice")));
            }
        }
        Ok(MonomialRing { variables })
    }

    /// `x, y` for `d = 2`, `x, y, z` for `d = 3`, `x1..xd` beyond.
    pub fn standard(dim: usize) -> Result<Self> {
        match dim {
            2 => Self::new(&["x", "y"]),
            3 => Self::new(&["x", "y", "z"]),
            _ => Self::new(&(1..=dim).map(|i| format!("x{i}")).collect::<Vec<_>>()),
        }
    }

    pub fn dim(&self) -> usize {
        self.variables.len()
    }

    pub fn variables(&self) -> &[String] {
        &self.variables
    }

    pub fn variable_index(&self, name: &str) -> Option<usize> {
        self.variables.iter().position(|v| v == name)
    }

    pub(crate) fn format_monomial(&self, e: &[u32]) -> String {
        let parts: Vec<String> = e
            .iter()
            .zip(&self.variables)
            .filter(|(&p, _)| p > 0)
            .map(|(&p, v)| if p == 1 { v.clone() } else { format!("{v}^{p}") })
            .collect();
        if parts.is_empty() {
            "1".into()
        } else {
            parts.join("*")
        }
    }
}

impl fmt::Display for MonomialRing {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "power_series({})", self.variables.join(", "))
    }
}

#[inline]
pub(crate) fn divides(a: &[u32], b: &[u32]) -> bool {
    a.iter().zip(b).all(|(x, y)| x <= y)
}

/// The minimal antichain of `gens` under componentwise order, sorted lexicographically.
pub(crate) fn minimalize(mut gens: Vec<Vec<u32>>) -> Vec<Vec<u32>> {
    gens.sort_unstable();
    gens.dedup();
    if gens.first().is_some_and(|g| g.len() == 2) {
        // lex order: x ascending then y ascending; keep strictly decreasing y
        let mut kept: Vec<Vec<u32>> = Vec::new();
        let mut min_y = u32::MAX;
        for g in gens {
            if g[1] < min_y {
                min_y = g[1];
                kept.push(g);
            }
        }
        return kept;
    }
    // a divisor is lexicographically smaller, so it is already decided when we reach its multiple
    let mut kept: Vec<Vec<u32>> = Vec::with_capacity(gens.len());
    for g in gens {
        if !kept.iter().any(|k| divides(k, &g)) {
            kept.push(g);
        }
    }
    kept
}

/// Pure-power exponents `a_k` with `x_k^{a_k}` in the ideal, if every coordinate has one.
pub(crate) fn pure_powers(gens: &[Vec<u32>], dim: usize) -> Option<Vec<u32>> {
    (0..dim)
        .map(|k| {
            gens.iter()
                .filter(|g| g.iter().enumerate().all(|(j, &e)| j == k || e == 0))
                .map(|g| g[k])
                .min()
        })
        .collect()
}

/// Number of lattice points outside the ideal generated by the minimal antichain `gens`.
///
/// The bounding box is swept along the first coordinate; between consecutive
/// first-coordinate breakpoints the slice ideal is constant, and its colength
/// is counted recursively in one dimension less.
pub(crate) fn staircase_count(gens: &[Vec<u32>]) -> u64 {
    let dim = gens[0].len();
    if dim == 1 {
        return gens.iter().map(|g| g[0]).min().unwrap_or(0) as u64;
    }
    let mut by_first: Vec<&Vec<u32>> = gens.iter().collect();
    by_first.sort_by_key(|g| g[0]);
    let edge = by_first
        .iter()
        .filter(|g| g[1..].iter().all(|&e| e == 0))
        .map(|g| g[0])
        .min()
        .expect("m-primary ideal has a pure power in the first coordinate");

    let mut total = 0u64;
    let mut slice: Vec<Vec<u32>> = Vec::new();
    let mut i = 0;
    while i < by_first.len() && by_first[i][0] < edge {
        let x = by_first[i][0];
        while i < by_first.len() && by_first[i][0] == x {
            slice.push(by_first[i][1..].to_vec());
            i += 1;
        }
        let next = if i < by_first.len() { by_first[i][0].min(edge) } else { edge };
        slice = minimalize(slice);
        total += staircase_count(&slice) * (next - x) as u64;
    }
    total
}

/// Twice the area below the lower convex hull of the staircase, in `d = 2`.
pub(crate) fn newton_covolume_doubled(gens: &[Vec<u32>]) -> u64 {
    // antichain in lex order: x ascending, y descending
    let pts: Vec<(i64, i64)> = gens.iter().map(|g| (g[0] as i64, g[1] as i64)).collect();
    let mut hull: Vec<(i64, i64)> = Vec::with_capacity(pts.len());
    for p in pts {
        while hull.len() >= 2 {
            let o = hull[hull.len() - 2];
            let a = hull[hull.len() - 1];
            let cross = (a.0 - o.0) * (p.1 - o.1) - (a.1 - o.1) * (p.0 - o.0);
            if cross <= 0 {
                hull.pop();
            } else {
                break;
            }
        }
        hull.push(p);
    }
    hull.windows(2)
        .map(|w| ((w[1].0 - w[0].0) * (w[0].1 + w[1].1)) as u64)
        .sum()
}

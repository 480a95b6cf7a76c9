//! Named graph families.
//!
//! `n` is always the total number of vertices. Vertex orders are fixed so
//! that signed flows, and therefore every exact computation, are reproducible:
//!
//! | token | graph | order |
//! |---|---|---|
//! | `chain` | path on `n` vertices, `n >= 1` | along the path |
//! | `cycle` | cycle, `n >= 3` | around the cycle |
//! | `dn` | path on `n-2` vertices, two leaves on its last vertex, `n >= 4` | path, then leaves |
//! | `dn_hat` | path on `n-4` vertices, two leaves at each end, `n >= 5` | path, first-end leaves, last-end leaves |
//! | `leg:k` | path on `n-1` vertices, one leaf on its `k`-th vertex, `1 <= k <= n-1` | path, then leaf |
//! | `dn_leg:k` | `dn` on `n-1` vertices plus a leaf on the `k`-th path vertex counted from the fork (fork vertex is 1) | path, fork leaves, leaf |
//! | `dn_leg_far:k` | as `dn_leg`, leaf on the `k`-th path vertex counted from the free end | path, fork leaves, leaf |
//! | `kn` | complete graph, `n >= 1` | `0..n`, edges lexicographic |
//! | `kn_minus_edge` | `kn` without edge `{0,1}`, `n >= 2` | as `kn` |
//! | `kn_minus_two_disjoint` | `kn` without `{0,1}` and `{2,3}`, `n >= 4` | as `kn` |
//! | `square_parallel_doubles` | 4-cycle with sides `{0,1}`, `{2,3}` doubled, `n = 4` | around the square |
//! | `square_adjacent_doubles` | 4-cycle with sides `{0,1}`, `{1,2}` doubled, `n = 4` | around the square |
//! | `k3_plus_e` | triangle with side `{0,1}` doubled, `n = 3` | `0, 1, 2` |
//!
//! `leg(k)` is accepted as a synonym for `leg:k`; likewise for the other
//! parameterized tokens.

use crate::error::{Error, Result};
use crate::graph::Multigraph;

/// Every accepted token, parameterized ones shown with `k`.
pub const FAMILY_TOKENS: &[&str] = &[
    "chain",
    "cycle",
    "dn",
    "dn_hat",
    "leg:k",
    "dn_leg:k",
    "dn_leg_far:k",
    "kn",
    "kn_minus_edge",
    "kn_minus_two_disjoint",
    "square_parallel_doubles",
    "square_adjacent_doubles",
    "k3_plus_e",
];

/// Vertex count of families that come in a single size.
pub fn fixed_size(name: &str) -> Option<usize> {
    match name.trim() {
        "square_parallel_doubles" | "square_adjacent_doubles" => Some(4),
        "k3_plus_e" => Some(3),
        _ => None,
    }
}

fn range(family: &str, message: impl Into<String>) -> Error {
    Error::FamilyRange {
        family: family.to_string(),
        message: message.into(),
    }
}

fn need(family: &str, n: usize, min: usize) -> Result<()> {
    if n < min {
        Err(range(
            family,
            format!("needs at least {min} vertices, got {n}"),
        ))
    } else {
        Ok(())
    }
}

/// Splits `leg:3` or `leg(3)` into `("leg", Some(3))`.
fn split_token(token: &str) -> Result<(&str, Option<usize>)> {
    let token = token.trim();
    let (base, arg) = if let Some((b, a)) = token.split_once(':') {
        (b, Some(a))
    } else if let Some((b, a)) = token.split_once('(') {
        match a.strip_suffix(')') {
            Some(a) => (b, Some(a)),
            None => return Err(Error::UnknownFamily(token.to_string())),
        }
    } else {
        (token, None)
    };
    let k = match arg {
        None => None,
        Some(a) => Some(
            a.trim()
                .parse::<usize>()
                .map_err(|_| Error::UnknownFamily(token.to_string()))?,
        ),
    };
    Ok((base.trim(), k))
}

fn path_edges(len: usize) -> Vec<(usize, usize)> {
    (1..len).map(|i| (i - 1, i)).collect()
}

fn complete_edges(n: usize, skip: &[(usize, usize)]) -> Vec<(usize, usize)> {
    let mut edges = Vec::new();
    for i in 0..n {
        for j in i + 1..n {
            if !skip.contains(&(i, j)) {
                edges.push((i, j));
            }
        }
    }
    edges
}

/// Path `0..m` with two leaves on vertex `m-1` and one extra leaf on `at`.
fn forked_path_with_leaf(m: usize, at: usize) -> Multigraph {
    let mut edges = path_edges(m);
    edges.push((m - 1, m));
    edges.push((m - 1, m + 1));
    edges.push((at, m + 2));
    Multigraph::from_edges(m + 3, &edges)
}

/// Builds the graph named by `token` on `n` vertices.
pub fn generate_family(token: &str, n: usize) -> Result<Multigraph> {
    let (name, k) = split_token(token)?;
    let parameterized = matches!(name, "leg" | "dn_leg" | "dn_leg_far");
    if parameterized != k.is_some() {
        return Err(Error::UnknownFamily(token.trim().to_string()));
    }
    if let Some(size) = fixed_size(name) {
        if n != size {
            return Err(range(
                name,
                format!("exists only with {size} vertices, got {n}"),
            ));
        }
    }
    let g = match name {
        "chain" => {
            need(name, n, 1)?;
            Multigraph::from_edges(n, &path_edges(n))
        }
        "cycle" => {
            need(name, n, 3)?;
            let mut edges = path_edges(n);
            edges.push((0, n - 1));
            Multigraph::from_edges(n, &edges)
        }
        "dn" => {
            need(name, n, 4)?;
            let m = n - 2;
            let mut edges = path_edges(m);
            edges.push((m - 1, m));
            edges.push((m - 1, m + 1));
            Multigraph::from_edges(n, &edges)
        }
        "dn_hat" => {
            need(name, n, 5)?;
            let m = n - 4;
            let mut edges = path_edges(m);
            edges.extend([(0, m), (0, m + 1), (m - 1, m + 2), (m - 1, m + 3)]);
            Multigraph::from_edges(n, &edges)
        }
        "leg" => {
            let k = k.unwrap_or(0);
            need(name, n, 2)?;
            if k == 0 || k > n - 1 {
                return Err(range(
                    name,
                    format!("leg position {k} outside 1..={}", n - 1),
                ));
            }
            let mut edges = path_edges(n - 1);
            edges.push((k - 1, n - 1));
            Multigraph::from_edges(n, &edges)
        }
        "dn_leg" | "dn_leg_far" => {
            let k = k.unwrap_or(0);
            need(name, n, 4)?;
            let m = n - 3;
            if k == 0 || k > m {
                return Err(range(name, format!("leg position {k} outside 1..={m}")));
            }
            let at = if name == "dn_leg" { m - k } else { k - 1 };
            forked_path_with_leaf(m, at)
        }
        "kn" => {
            need(name, n, 1)?;
            Multigraph::from_edges(n, &complete_edges(n, &[]))
        }
        "kn_minus_edge" => {
            need(name, n, 2)?;
            Multigraph::from_edges(n, &complete_edges(n, &[(0, 1)]))
        }
        "kn_minus_two_disjoint" => {
            need(name, n, 4)?;
            Multigraph::from_edges(n, &complete_edges(n, &[(0, 1), (2, 3)]))
        }
        "square_parallel_doubles" => {
            Multigraph::from_edges(4, &[(0, 1), (0, 1), (1, 2), (2, 3), (2, 3), (0, 3)])
        }
        "square_adjacent_doubles" => {
            Multigraph::from_edges(4, &[(0, 1), (0, 1), (1, 2), (1, 2), (2, 3), (0, 3)])
        }
        "k3_plus_e" => Multigraph::from_edges(3, &[(0, 1), (0, 1), (1, 2), (0, 2)]),
        _ => return Err(Error::UnknownFamily(token.trim().to_string())),
    };
    Ok(g)
}

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::coalition::Coalition;
use crate::error::{Error, Result};
use crate::game::{check_player, check_players, Game};

/// Undirected graph with edge weights `f_ij` and optional node weights `w_i`.
#[derive(Clone, Debug, PartialEq)]
pub struct Network {
    n: usize,
    adjacency: Vec<u64>,
    edges: Vec<(usize, usize, f64)>,
    node_weights: Option<Vec<f64>>,
}

impl Network {
    pub fn new(n: usize) -> Result<Self> {
        check_players(n)?;
        Ok(Network {
            n,
            adjacency: vec![0; n],
            edges: Vec::new(),
            node_weights: None,
        })
    }

    /// Builds a network from `(u, v, f_uv)` triples.
    pub fn from_edges<I>(n: usize, edges: I) -> Result<Self>
    where
        I: IntoIterator<Item = (usize, usize, f64)>,
    {
        let mut net = Network::new(n)?;
        for (u, v, f) in edges {
            net.add_edge(u, v, f)?;
        }
        Ok(net)
    }

    pub fn add_edge(&mut self, u: usize, v: usize, f: f64) -> Result<()> {
        check_player(u, self.n)?;
        check_player(v, self.n)?;
        if u == v {
            return Err(Error::MalformedData(format!("self-loop at node {u}")));
        }
        if !f.is_finite() || f < 0.0 {
            return Err(Error::MalformedData(format!(
                "edge {u}-{v} has invalid weight {f}"
            )));
        }
        if self.adjacency[u] >> v & 1 == 1 {
            return Err(Error::MalformedData(format!("edge {u}-{v} is listed twice")));
        }
        self.adjacency[u] |= 1 << v;
        self.adjacency[v] |= 1 << u;
        self.edges.push((u.min(v), u.max(v), f));
        Ok(())
    }

    pub fn set_node_weights(&mut self, weights: Vec<f64>) -> Result<()> {
        if weights.len() != self.n {
            return Err(Error::MalformedData(format!(
                "{} node weights for {} nodes",
                weights.len(),
                self.n
            )));
        }
        if let Some((i, w)) = weights
            .iter()
            .enumerate()
            .find(|(_, w)| !w.is_finite() || **w < 0.0)
        {
            return Err(Error::MalformedData(format!("node {i} has invalid weight {w}")));
        }
        self.node_weights = Some(weights);
        Ok(())
    }

    pub fn nodes(&self) -> usize {
        self.n
    }

    pub fn edges(&self) -> &[(usize, usize, f64)] {
        &self.edges
    }

    pub fn node_weights(&self) -> Option<&[f64]> {
        self.node_weights.as_deref()
    }

    pub fn neighbors(&self, i: usize) -> Coalition {
        Coalition::from_bits(self.adjacency[i])
    }

    /// Whether `s` induces a connected subgraph (breadth-first search over
    /// induced edges). The empty set counts as disconnected.
    pub fn is_connected(&self, s: Coalition) -> bool {
        let Some(start) = s.first() else {
            return false;
        };
        let inside = s.bits();
        let mut seen = 1u64 << start;
        let mut frontier = seen;
        while frontier != 0 {
            let mut next = 0u64;
            let mut f = frontier;
            while f != 0 {
                let i = f.trailing_zeros() as usize;
                f &= f - 1;
                next |= self.adjacency[i] & inside;
            }
            frontier = next & !seen;
            seen |= frontier;
        }
        seen == inside
    }

    /// Number of edges inside `s` and the sum of their weights.
    pub fn internal_edges(&self, s: Coalition) -> (usize, f64) {
        self.edges
            .iter()
            .filter(|&&(u, v, _)| s.contains(u) && s.contains(v))
            .fold((0, 0.0), |(k, w), &(_, _, f)| (k + 1, w + f))
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum NetworkFamily {
    /// 1 on connected coalitions of two or more nodes.
    Conn,
    /// Internal edge count over internal edge weight, on connected coalitions.
    Wconn,
    /// Sum of node weights, on connected coalitions.
    Wconn2,
}

impl FromStr for NetworkFamily {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "conn" => Ok(NetworkFamily::Conn),
            "wconn" => Ok(NetworkFamily::Wconn),
            "wconn2" => Ok(NetworkFamily::Wconn2),
            other => Err(Error::InvalidParameter(format!(
                "unknown network family '{other}' (expected conn, wconn or wconn2)"
            ))),
        }
    }
}

impl fmt::Display for NetworkFamily {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            NetworkFamily::Conn => "conn",
            NetworkFamily::Wconn => "wconn",
            NetworkFamily::Wconn2 => "wconn2",
        })
    }
}

/// A game whose worth is zero unless the coalition induces a connected
/// subgraph with at least two nodes.
#[derive(Clone, Debug)]
pub struct NetworkGame {
    net: Network,
    family: NetworkFamily,
}

impl NetworkGame {
    pub fn new(net: Network, family: NetworkFamily) -> Result<Self> {
        match family {
            NetworkFamily::Conn => {}
            NetworkFamily::Wconn => {
                // A zero-weight edge is itself a connected pair with zero
                // internal weight; otherwise every connected pair or larger
                // set has a positive internal sum.
                if let Some(&(u, v, _)) = net.edges.iter().find(|e| e.2 == 0.0) {
                    return Err(Error::MalformedData(format!(
                        "edge {u}-{v} has zero weight, so coalition {{{u},{v}}} has no internal weight"
                    )));
                }
            }
            NetworkFamily::Wconn2 => {
                if net.node_weights.is_none() {
                    return Err(Error::MalformedData(
                        "wconn2 needs node weights".into(),
                    ));
                }
            }
        }
        Ok(NetworkGame { net, family })
    }

    pub fn network(&self) -> &Network {
        &self.net
    }

    pub fn family(&self) -> NetworkFamily {
        self.family
    }
}

impl Game for NetworkGame {
    fn players(&self) -> usize {
        self.net.n
    }

    fn worth(&self, s: Coalition) -> f64 {
        if s.len() < 2 || !self.net.is_connected(s) {
            return 0.0;
        }
        match self.family {
            NetworkFamily::Conn => 1.0,
            NetworkFamily::Wconn => {
                let (count, weight) = self.net.internal_edges(s);
                count as f64 / weight
            }
            NetworkFamily::Wconn2 => {
                let w = self.net.node_weights.as_ref().expect("checked at construction");
                s.players().map(|i| w[i]).sum()
            }
        }
    }
}

pub fn connectivity_game(net: &Network) -> NetworkGame {
    NetworkGame {
        net: net.clone(),
        family: NetworkFamily::Conn,
    }
}

pub fn wconn_game(net: &Network) -> Result<NetworkGame> {
    NetworkGame::new(net.clone(), NetworkFamily::Wconn)
}

pub fn wconn2_game(net: &Network) -> Result<NetworkGame> {
    NetworkGame::new(net.clone(), NetworkFamily::Wconn2)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn c(players: &[usize]) -> Coalition {
        Coalition::from_players(players.iter().copied())
    }

    #[test]
    fn path_connectivity() {
        let net = Network::from_edges(3, [(0, 1, 1.0), (1, 2, 1.0)]).unwrap();
        let g = connectivity_game(&net);
        assert_eq!(g.worth(c(&[0, 2])), 0.0);
        assert_eq!(g.worth(c(&[0, 1])), 1.0);
        assert_eq!(g.worth(c(&[0, 1, 2])), 1.0);
        for i in 0..3 {
            assert_eq!(g.worth(Coalition::singleton(i)), 0.0);
        }
        assert_eq!(g.worth(Coalition::EMPTY), 0.0);
    }

    #[test]
    fn weighted_relations() {
        let edge = Network::from_edges(2, [(0, 1, 2.0)]).unwrap();
        assert_eq!(wconn_game(&edge).unwrap().worth(c(&[0, 1])), 0.5);

        let tri = Network::from_edges(3, [(0, 1, 1.0), (1, 2, 2.0), (0, 2, 2.0)]).unwrap();
        let g = wconn_game(&tri).unwrap();
        assert!((g.worth(c(&[0, 1, 2])) - 0.6).abs() < 1e-15);

        let split = Network::from_edges(4, [(0, 1, 1.0), (2, 3, 1.0)]).unwrap();
        assert_eq!(wconn_game(&split).unwrap().worth(c(&[0, 1, 2, 3])), 0.0);
    }

    #[test]
    fn weighted_nodes() {
        let mut net = Network::from_edges(3, [(0, 1, 1.0)]).unwrap();
        assert!(wconn2_game(&net).is_err());
        net.set_node_weights(vec![2.0, 3.0, 0.0]).unwrap();
        let g = wconn2_game(&net).unwrap();
        assert_eq!(g.worth(c(&[0, 1])), 5.0);
        assert_eq!(g.worth(c(&[0, 2])), 0.0);
    }

    #[test]
    fn zero_weight_non_participants() {
        // Nodes with zero weight still connect others but add nothing.
        let mut net = Network::from_edges(3, [(0, 1, 1.0), (1, 2, 1.0)]).unwrap();
        net.set_node_weights(vec![1.5, 0.0, 2.5]).unwrap();
        let g = wconn2_game(&net).unwrap();
        assert_eq!(g.worth(c(&[0, 1, 2])), 4.0);
        assert_eq!(g.worth(c(&[0, 2])), 0.0);
        assert_eq!(g.worth(c(&[0, 1])), 1.5);
    }

    #[test]
    fn construction_errors() {
        assert!(Network::from_edges(3, [(0, 0, 1.0)]).is_err());
        assert!(Network::from_edges(3, [(0, 3, 1.0)]).is_err());
        assert!(Network::from_edges(3, [(0, 1, -1.0)]).is_err());
        assert!(Network::from_edges(3, [(0, 1, 1.0), (1, 0, 1.0)]).is_err());
        let zero = Network::from_edges(3, [(0, 1, 0.0)]).unwrap();
        assert!(matches!(wconn_game(&zero), Err(Error::MalformedData(_))));
        let mut net = Network::new(2).unwrap();
        assert!(net.set_node_weights(vec![1.0]).is_err());
        assert!(net.set_node_weights(vec![1.0, -2.0]).is_err());
        assert!("triangle".parse::<NetworkFamily>().is_err());
    }

    #[test]
    fn unit_weights_majorize_connectivity() {
        let mut net = Network::from_edges(
            6,
            [(0, 1, 1.0), (1, 2, 3.0), (2, 3, 1.0), (3, 4, 2.0), (1, 5, 1.0)],
        )
        .unwrap();
        net.set_node_weights(vec![1.0; 6]).unwrap();
        let conn = connectivity_game(&net);
        let w2 = wconn2_game(&net).unwrap();
        for s in Coalition::full(6).subsets() {
            if net.is_connected(s) && s.len() > 1 {
                assert_eq!(w2.worth(s), s.len() as f64);
                assert!(w2.worth(s) >= conn.worth(s));
            }
        }
    }

    proptest! {
        #[test]
        fn worth_depends_only_on_induced_subgraph(
            edges in prop::collection::vec((0usize..8, 0usize..8, 0.5f64..3.0), 0..20),
            extra in (0usize..8, 0usize..8),
            mask in 0u64..256,
        ) {
            let mut net = Network::new(8).unwrap();
            for (u, v, f) in edges {
                if u != v && !net.neighbors(u).contains(v) {
                    net.add_edge(u, v, f).unwrap();
                }
            }
            net.set_node_weights((0..8).map(|i| i as f64 * 0.5).collect()).unwrap();
            let s = Coalition::from_bits(mask);
            let (a, b) = extra;
            // An edge with an endpoint outside S leaves every family unchanged.
            let outside = (0..8).find(|&x| !s.contains(x));
            if let (Some(o), true) = (outside, a != b) {
                let other = if a == o { b } else { a };
                if other != o && !net.neighbors(o).contains(other) {
                    let mut bigger = net.clone();
                    bigger.add_edge(o, other, 1.0).unwrap();
                    for fam in [NetworkFamily::Conn, NetworkFamily::Wconn, NetworkFamily::Wconn2] {
                        let g = NetworkGame::new(net.clone(), fam).unwrap();
                        let h = NetworkGame::new(bigger.clone(), fam).unwrap();
                        prop_assert_eq!(g.worth(s), h.worth(s));
                    }
                }
            }
        }

        #[test]
        fn bfs_agrees_with_union_find(
            edges in prop::collection::vec((0usize..10, 0usize..10), 0..25),
            mask in 1u64..1024,
        ) {
            let mut net = Network::new(10).unwrap();
            for (u, v) in edges {
                if u != v && !net.neighbors(u).contains(v) {
                    net.add_edge(u, v, 1.0).unwrap();
                }
            }
            let s = Coalition::from_bits(mask);
            let mut parent: Vec<usize> = (0..10).collect();
            fn find(p: &mut Vec<usize>, x: usize) -> usize {
                if p[x] != x {
                    let r = find(p, p[x]);
                    p[x] = r;
                }
                p[x]
            }
            for &(u, v, _) in net.edges() {
                if s.contains(u) && s.contains(v) {
                    let (ru, rv) = (find(&mut parent, u), find(&mut parent, v));
                    parent[ru] = rv;
                }
            }
            let roots: std::collections::BTreeSet<usize> =
                s.players().map(|i| find(&mut parent, i)).collect();
            prop_assert_eq!(net.is_connected(s), roots.len() == 1);
        }
    }
}

//! Graph and colouring files.

use std::collections::BTreeMap;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::abelian::{AbelianGroup, FiniteAbelianGroup};
use crate::colouring::EdgeColouring;
use crate::error::{Error, Result};
use crate::graphs::Graph;

#[derive(Serialize, Deserialize)]
struct GraphFile {
    vertices: usize,
    edges: Vec<[usize; 2]>,
}

pub fn graph_to_json(graph: &Graph) -> String {
    let file = GraphFile {
        vertices: graph.vertex_count(),
        edges: graph.edges().iter().map(|&(u, v)| [u, v]).collect(),
    };
    serde_json::to_string(&file).expect("graph files serialize")
}

/// JSON `{"vertices": N, "edges": [[u,v], ...]}`, or one `u v` pair per line. In the text
/// form a line holding a single number sets the vertex count; `#` starts a comment.
pub fn parse_graph(text: &str) -> Result<Graph> {
    if text.trim_start().starts_with('{') {
        let file: GraphFile = serde_json::from_str(text)?;
        return Graph::new(file.vertices, file.edges.into_iter().map(|[u, v]| (u, v)));
    }
    let mut edges = Vec::new();
    let mut declared = None;
    for (no, line) in text.lines().enumerate() {
        let line = line.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let nums: Vec<usize> = line
            .split_whitespace()
            .map(|w| w.parse().map_err(|_| Error::Parse(format!("line {}: bad number {w:?}", no + 1))))
            .collect::<Result<_>>()?;
        match nums[..] {
            [n] => declared = Some(n),
            [u, v] => edges.push((u, v)),
            _ => return Err(Error::Parse(format!("line {}: expected \"u v\"", no + 1))),
        }
    }
    let implied = edges.iter().map(|&(u, v)| u.max(v) + 1).max().unwrap_or(0);
    Graph::new(declared.unwrap_or(implied), edges)
}

#[derive(Serialize, Deserialize)]
struct ColouringFile {
    group: String,
    t: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    edges: Option<BTreeMap<String, String>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    all: Option<String>,
}

/// Constant colourings use the `"all"` shorthand.
pub fn colouring_to_json(c: &EdgeColouring<AbelianGroup>) -> String {
    let g = c.group();
    let first = c.values().next();
    let constant = first.filter(|&x| c.values().all(|y| y == x));
    let file = ColouringFile {
        group: g.to_string(),
        t: c.t(),
        edges: constant.is_none().then(|| {
            let mut map = BTreeMap::new();
            for v in 1..c.t() {
                for u in 0..v {
                    map.insert(format!("{u},{v}"), g.label(c.get(u, v)));
                }
            }
            map
        }),
        all: constant.map(|x| g.label(x)),
    };
    serde_json::to_string(&file).expect("colouring files serialize")
}

pub fn parse_colouring(text: &str) -> Result<EdgeColouring<AbelianGroup>> {
    let file: ColouringFile = serde_json::from_str(text)?;
    let group: AbelianGroup = file.group.parse()?;
    let element = |s: &str| -> Result<usize> { group.index_of(&group.parse_element(s)?) };
    match (file.all, file.edges) {
        (Some(all), None) => Ok(EdgeColouring::constant(&group, file.t, element(&all)?)),
        (None, Some(map)) => {
            let t = file.t;
            let mut values = vec![None; t * t.saturating_sub(1) / 2];
            for (key, val) in &map {
                let (u, v) = key
                    .split_once(',')
                    .and_then(|(a, b)| Some((a.trim().parse::<usize>().ok()?, b.trim().parse::<usize>().ok()?)))
                    .ok_or_else(|| Error::Parse(format!("bad edge key {key:?}")))?;
                if u == v || u >= t || v >= t {
                    return Err(Error::Parse(format!("edge key {key:?} outside K_{t}")));
                }
                let (a, b) = (u.min(v), u.max(v));
                let slot = &mut values[b * (b - 1) / 2 + a];
                if slot.replace(element(val)?).is_some() {
                    return Err(Error::Parse(format!("pair {a},{b} given twice")));
                }
            }
            let values: Vec<usize> = values.into_iter().collect::<Option<_>>().ok_or_else(|| {
                Error::Parse(format!("colouring of K_{t} needs all {} pairs", t * t.saturating_sub(1) / 2))
            })?;
            EdgeColouring::from_values(&group, t, values)
        }
        _ => Err(Error::Parse("colouring needs exactly one of \"edges\" and \"all\"".into())),
    }
}

pub fn read_graph(path: &Path) -> Result<Graph> {
    parse_graph(&std::fs::read_to_string(path)?)
}

pub fn read_colouring(path: &Path) -> Result<EdgeColouring<AbelianGroup>> {
    parse_colouring(&std::fs::read_to_string(path)?)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graphs::generate;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn graph_formats() {
        let c4 = generate::cycle(4).unwrap();
        assert_eq!(parse_graph(&graph_to_json(&c4)).unwrap(), c4);
        assert_eq!(parse_graph("0 1\n1 2\n2 3\n3 0\n").unwrap(), c4);
        let isolated = parse_graph("# two edges on six vertices\n6\n0 1\n2 3\n").unwrap();
        assert_eq!(isolated.vertex_count(), 6);
        assert!(parse_graph("0 1 2").is_err());
        assert!(parse_graph(r#"{"vertices": 2, "edges": [[0, 2]]}"#).is_err());
    }

    #[test]
    fn colouring_formats() {
        let g: AbelianGroup = "Z2xZ4".parse().unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let c = EdgeColouring::random(&g, 7, &mut rng);
        assert_eq!(parse_colouring(&colouring_to_json(&c)).unwrap(), c);
        let k = EdgeColouring::constant(&g, 5, 3);
        let text = colouring_to_json(&k);
        assert!(text.contains("\"all\""));
        assert_eq!(parse_colouring(&text).unwrap(), k);
        let short = r#"{"group": "Z2", "t": 3, "edges": {"0,1": "(1)", "1,2": "(0)"}}"#;
        assert!(parse_colouring(short).is_err());
        let full = r#"{"group": "Z2", "t": 3, "edges": {"0,1": "(1)", "2,1": "(0)", "0,2": "1"}}"#;
        let c = parse_colouring(full).unwrap();
        assert_eq!((c.get(0, 1), c.get(1, 2), c.get(0, 2)), (1, 0, 1));
        let trivial = r#"{"group": "Z1", "t": 4, "all": "()"}"#;
        assert_eq!(parse_colouring(trivial).unwrap().group().order(), 1);
    }
}

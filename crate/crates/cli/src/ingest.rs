//! Input files: explicit games (JSON), edge lists, node weights, influence
//! weights and survey tables, each read with line/column diagnostics.

use std::collections::HashMap;
use std::path::{Path, PathBuf};

use groupvalue_core::applied::{
    linear_threshold_game, reach_noise_game, InfluenceModel, Network, NetworkFamily, NetworkGame,
    SurveyData,
};
use groupvalue_core::game::files::{DividendFile, WorthFile};
use groupvalue_core::{Coalition, Game};
use serde::Serialize;
use sha2::{Digest, Sha256};

use crate::error::{CliError, CliResult};
use crate::labels::LabeledUniverse;

pub type SharedGame = Box<dyn Game + Send + Sync>;

/// A file that was read, with its SHA-256 digest.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct InputDigest {
    pub path: String,
    pub sha256: String,
}

pub struct Loaded {
    pub game: SharedGame,
    pub universe: LabeledUniverse,
    pub inputs: Vec<InputDigest>,
}

pub enum Source {
    Game(PathBuf),
    Network {
        edges: PathBuf,
        family: NetworkFamily,
        weights: Option<PathBuf>,
    },
    Influence {
        path: PathBuf,
        runs: u64,
        seed: u64,
    },
    Survey(PathBuf),
}

fn read(path: &Path, inputs: &mut Vec<InputDigest>) -> CliResult<String> {
    let bytes = std::fs::read(path).map_err(|e| CliError::File {
        path: path.to_path_buf(),
        message: e.to_string(),
    })?;
    inputs.push(InputDigest {
        path: path.display().to_string(),
        sha256: hex::encode(Sha256::digest(&bytes)),
    });
    String::from_utf8(bytes).map_err(|e| CliError::File {
        path: path.to_path_buf(),
        message: format!("not valid UTF-8: {e}"),
    })
}

pub fn load(source: &Source) -> CliResult<Loaded> {
    let mut inputs = Vec::new();
    let (game, universe) = match source {
        Source::Game(path) => parse_game(path, &read(path, &mut inputs)?)?,
        Source::Network {
            edges,
            family,
            weights,
        } => {
            let text = read(edges, &mut inputs)?;
            let (mut net, universe) = parse_edges(edges, &text, Some(*family))?;
            if let Some(wp) = weights {
                let w = parse_node_weights(wp, &read(wp, &mut inputs)?, &universe)?;
                net.set_node_weights(w).map_err(|e| CliError::File {
                    path: wp.clone(),
                    message: e.to_string(),
                })?;
            }
            let game = NetworkGame::new(net, *family).map_err(|e| CliError::File {
                path: edges.clone(),
                message: e.to_string(),
            })?;
            (Box::new(game) as SharedGame, universe)
        }
        Source::Influence { path, runs, seed } => {
            let (model, universe) = parse_influence(path, &read(path, &mut inputs)?)?;
            let game = linear_threshold_game(&model, *runs, *seed)?;
            (Box::new(game) as SharedGame, universe)
        }
        Source::Survey(path) => {
            let (data, universe) = parse_survey(path, &read(path, &mut inputs)?)?;
            (Box::new(reach_noise_game(&data)) as SharedGame, universe)
        }
    };
    Ok(Loaded {
        game,
        universe,
        inputs,
    })
}

fn parse_game(path: &Path, text: &str) -> CliResult<(SharedGame, LabeledUniverse)> {
    let value: serde_json::Value = serde_json::from_str(text)
        .map_err(|e| CliError::parse(path, e.line(), e.column(), e.to_string()))?;
    let file_err = |message: String| CliError::File {
        path: path.to_path_buf(),
        message,
    };
    let has = |k: &str| value.get(k).is_some();
    let (game, n, labels): (SharedGame, usize, Option<Vec<String>>) = if has("worths") {
        let f: WorthFile =
            serde_json::from_value(value).map_err(|e| file_err(e.to_string()))?;
        let g = f.to_game().map_err(|e| file_err(e.to_string()))?;
        (Box::new(g), f.n, f.labels)
    } else if has("dividends") {
        let f: DividendFile =
            serde_json::from_value(value).map_err(|e| file_err(e.to_string()))?;
        let g = f.to_game().map_err(|e| file_err(e.to_string()))?;
        (Box::new(g), f.n, f.labels)
    } else {
        return Err(file_err(
            "expected an object with \"n\" and either \"worths\" or \"dividends\"".into(),
        ));
    };
    let universe = match labels {
        Some(l) if l.len() != n => {
            return Err(file_err(format!("{} labels given for {n} players", l.len())))
        }
        Some(l) => LabeledUniverse::new(l)?,
        None => LabeledUniverse::numbered(n),
    };
    Ok((game, universe))
}

/// Splits a line on whitespace and commas, keeping 1-based columns.
fn tokens(line: &str) -> Vec<(usize, &str)> {
    let mut out = Vec::new();
    let mut start = None;
    for (col, (byte, ch)) in line.char_indices().enumerate() {
        let sep = ch.is_whitespace() || ch == ',';
        match (sep, start) {
            (false, None) => start = Some((col, byte)),
            (true, Some((c, b))) => {
                out.push((c + 1, &line[b..byte]));
                start = None;
            }
            _ => {}
        }
    }
    if let Some((c, b)) = start {
        out.push((c + 1, &line[b..]));
    }
    out
}

/// Nonblank, non-comment lines with 1-based line numbers.
fn records(text: &str) -> impl Iterator<Item = (usize, Vec<(usize, &str)>)> {
    text.lines().enumerate().filter_map(|(i, line)| {
        let body = line.split('#').next().unwrap_or("");
        let t = tokens(body);
        (!t.is_empty()).then_some((i + 1, t))
    })
}

fn number(path: &Path, line: usize, (col, tok): (usize, &str), what: &str) -> CliResult<f64> {
    tok.parse::<f64>()
        .ok()
        .filter(|x| x.is_finite())
        .ok_or_else(|| CliError::parse(path, line, col, format!("{what} '{tok}' is not a finite number")))
}

fn too_many(path: &Path, line: usize, extra: (usize, &str), shape: &str) -> CliError {
    CliError::parse(path, line, extra.0, format!("unexpected field '{}'; expected {shape}", extra.1))
}

/// Collects labels in order of appearance, then fixes the index order.
struct LabelCollector {
    seen: Vec<String>,
    known: HashMap<String, ()>,
}

impl LabelCollector {
    fn new() -> Self {
        LabelCollector {
            seen: Vec::new(),
            known: HashMap::new(),
        }
    }

    fn note(&mut self, l: &str) {
        if self.known.insert(l.to_string(), ()).is_none() {
            self.seen.push(l.to_string());
        }
    }

    fn finish(self, path: &Path) -> CliResult<LabeledUniverse> {
        if self.seen.is_empty() {
            return Err(CliError::File {
                path: path.to_path_buf(),
                message: "no players found".into(),
            });
        }
        LabeledUniverse::from_appearance(self.seen)
    }
}

type Triple<'a> = (usize, (usize, &'a str), Option<(usize, &'a str)>, Option<(usize, &'a str)>);

/// Lines of the form `a [b [x]]`, the shape shared by edge and influence
/// files. A lone label declares a player without links.
fn triples<'a>(path: &Path, text: &'a str, shape: &str) -> CliResult<(Vec<Triple<'a>>, LabeledUniverse)> {
    let mut labels = LabelCollector::new();
    let mut rows = Vec::new();
    for (line, t) in records(text) {
        if t.len() > 3 {
            return Err(too_many(path, line, t[3], shape));
        }
        labels.note(t[0].1);
        if let Some(b) = t.get(1) {
            labels.note(b.1);
        }
        rows.push((line, t[0], t.get(1).copied(), t.get(2).copied()));
    }
    Ok((rows, labels.finish(path)?))
}

/// Reads an edge list; `family` enables the checks that depend on the game built on it.
pub fn parse_edges(
    path: &Path,
    text: &str,
    family: Option<NetworkFamily>,
) -> CliResult<(Network, LabeledUniverse)> {
    let shape = "'u v [weight]'";
    let (rows, universe) = triples(path, text, shape)?;
    let mut net = Network::new(universe.len())?;
    for (line, a, b, w) in rows {
        let Some(b) = b else { continue };
        let f = match w {
            Some(w) => number(path, line, w, "edge weight")?,
            None => 1.0,
        };
        let (u, v) = (universe.index(a.1)?, universe.index(b.1)?);
        let at = |message: String| CliError::parse(path, line, a.0, message);
        if u == v {
            return Err(at(format!("self-loop at node '{}'", a.1)));
        }
        if f < 0.0 {
            return Err(at(format!("edge {}-{} has negative weight {f}", a.1, b.1)));
        }
        if f == 0.0 && family == Some(NetworkFamily::Wconn) {
            return Err(at(format!(
                "edge {}-{} has zero weight, which wconn cannot divide by",
                a.1, b.1
            )));
        }
        if net.neighbors(u).contains(v) {
            return Err(at(format!("edge {}-{} is listed twice", a.1, b.1)));
        }
        net.add_edge(u, v, f).map_err(|e| at(e.to_string()))?;
    }
    Ok((net, universe))
}

pub fn parse_node_weights(path: &Path, text: &str, universe: &LabeledUniverse) -> CliResult<Vec<f64>> {
    let mut w: Vec<Option<f64>> = vec![None; universe.len()];
    for (line, t) in records(text) {
        if t.len() != 2 {
            let col = t.get(2).map_or(t[0].0, |x| x.0);
            return Err(CliError::parse(path, line, col, "expected 'node weight'"));
        }
        let i = universe
            .index(t[0].1)
            .map_err(|e| CliError::parse(path, line, t[0].0, e.to_string()))?;
        if w[i].is_some() {
            return Err(CliError::parse(path, line, t[0].0, format!("node '{}' is listed twice", t[0].1)));
        }
        let x = number(path, line, t[1], "node weight")?;
        if x < 0.0 {
            return Err(CliError::parse(path, line, t[1].0, format!("node weight '{}' is negative", t[1].1)));
        }
        w[i] = Some(x);
    }
    w.into_iter()
        .enumerate()
        .map(|(i, x)| {
            x.ok_or_else(|| CliError::File {
                path: path.to_path_buf(),
                message: format!("node '{}' has no weight", universe.label(i)),
            })
        })
        .collect()
}

/// Lines `i j w`: agent `i` gives weight `w` to agent `j`.
pub fn parse_influence(path: &Path, text: &str) -> CliResult<(InfluenceModel, LabeledUniverse)> {
    let shape = "'listener source weight'";
    let (rows, universe) = triples(path, text, shape)?;
    let mut entries = Vec::new();
    for (line, a, b, w) in rows {
        let Some(b) = b else { continue };
        let Some(w) = w else {
            return Err(CliError::parse(path, line, b.0 + b.1.chars().count(), format!("missing weight; expected {shape}")));
        };
        let x = number(path, line, w, "influence weight")?;
        let (i, j) = (universe.index(a.1)?, universe.index(b.1)?);
        let at = |message: String| CliError::parse(path, line, a.0, message);
        if i == j {
            return Err(at(format!("agent '{}' influences itself", a.1)));
        }
        if x < 0.0 {
            return Err(at(format!("influence {}<-{} has negative weight {x}", a.1, b.1)));
        }
        if entries.iter().any(|&(p, q, _)| (p, q) == (i, j)) {
            return Err(at(format!("influence {}<-{} is listed twice", a.1, b.1)));
        }
        entries.push((i, j, x));
    }
    let n = universe.len();
    let mut incoming = vec![0.0; n];
    for &(i, _, x) in &entries {
        incoming[i] += x;
    }
    let model = InfluenceModel::from_weights(n, entries).map_err(|e| {
        let worst = (0..n).max_by(|&p, &q| incoming[p].total_cmp(&incoming[q]));
        let message = match worst {
            Some(i) if incoming[i] > 1.0 => format!(
                "incoming weights of agent '{}' sum to {} > 1",
                universe.label(i),
                incoming[i]
            ),
            _ => e.to_string(),
        };
        CliError::File {
            path: path.to_path_buf(),
            message,
        }
    })?;
    Ok((model, universe))
}

fn flag(cell: &str) -> Option<bool> {
    match cell.trim() {
        "1" => Some(true),
        "0" => Some(false),
        _ => None,
    }
}

/// CSV with one respondent per row: one 0/1 failure column per attribute and
/// the 0/1 dissatisfaction flag last. An optional header names attributes.
pub fn parse_survey(path: &Path, text: &str) -> CliResult<(SurveyData, LabeledUniverse)> {
    let mut reader = csv::ReaderBuilder::new()
        .has_headers(false)
        .flexible(true)
        .trim(csv::Trim::All)
        .from_reader(text.as_bytes());
    let mut header: Option<Vec<String>> = None;
    let mut width = None;
    let mut rows = Vec::new();
    for (k, rec) in reader.records().enumerate() {
        let rec = rec.map_err(|e| {
            let line = e.position().map_or(0, |p| p.line() as usize);
            CliError::parse(path, line, 1, e.to_string())
        })?;
        let line = rec.position().map_or(k + 1, |p| p.line() as usize);
        if rec.iter().all(|c| c.is_empty()) {
            continue;
        }
        if k == 0 && rec.iter().any(|c| flag(c).is_none()) {
            header = Some(rec.iter().map(str::to_string).collect());
            width = Some(rec.len());
            continue;
        }
        let w = *width.get_or_insert(rec.len());
        if rec.len() != w {
            return Err(CliError::parse(path, line, 1, format!("row has {} fields, expected {w}", rec.len())));
        }
        if w < 2 {
            return Err(CliError::parse(path, line, 1, "need at least one attribute and the outcome column"));
        }
        let mut failed = Coalition::EMPTY;
        let mut outcome = false;
        for (col, cell) in rec.iter().enumerate() {
            let b = flag(cell).ok_or_else(|| {
                CliError::parse(path, line, col + 1, format!("field {} is '{cell}', expected 0 or 1", col + 1))
            })?;
            if col + 1 == w {
                outcome = b;
            } else if b {
                failed = failed.with(col);
            }
        }
        rows.push((failed, outcome));
    }
    let Some(w) = width else {
        return Err(CliError::File {
            path: path.to_path_buf(),
            message: "no respondents found".into(),
        });
    };
    let universe = match header {
        Some(h) => LabeledUniverse::new(h[..w - 1].to_vec())?,
        None => LabeledUniverse::numbered(w - 1),
    };
    let data = SurveyData::new(w - 1, rows).map_err(|e| CliError::File {
        path: path.to_path_buf(),
        message: e.to_string(),
    })?;
    Ok((data, universe))
}

use groupvalue_core::axioms::{
    check_all, check_property, functional_by_name, Property, PropertyReport, SuiteSpec, Verdict,
};
use groupvalue_core::estimation::{mc_group_value, mc_shapley, SamplerConfig};
use groupvalue_core::game::merge;
use groupvalue_core::search::{explain_group, order_key, rank_groups, GreedyResult, SearchConfig};
use groupvalue_core::shapley::{
    average_complementarity, profitability as profit_report, segal_entrant_check,
    segal_pair_check, shapley_group_value, shapley_value, Method, SegalVerdict,
};
use groupvalue_core::Coalition;
use serde::{Deserialize, Serialize};

use crate::error::{CliError, CliResult};
use crate::ingest::{load, Loaded};
use crate::labels::LabeledUniverse;
use crate::output::{opt, render, sig12, Report, Table};
use crate::{
    AxiomsArgs, Common, ComplementarityArgs, GroupValueArgs, MethodArg, Produced,
    ProfitabilityArgs, RankArgs, ValueArgs,
};

fn method(mc: bool) -> Method {
    if mc {
        Method::MonteCarlo
    } else {
        Method::Exact
    }
}

fn method_name(m: Method) -> &'static str {
    match m {
        Method::Exact => "exact",
        Method::MonteCarlo => "monte-carlo",
    }
}

fn sampler(c: &Common) -> CliResult<SamplerConfig> {
    let cfg = SamplerConfig::new(c.sampling.iters, c.sampling.seed);
    cfg.validate()?;
    Ok(cfg)
}

fn produced<R: Report>(report: &R, c: &Common, loaded: Loaded, sampled: bool) -> CliResult<Produced> {
    Ok(Produced {
        bytes: render(report, c.output.format)?,
        inputs: loaded.inputs,
        seed: (sampled || c.input.influence.is_some()).then_some(c.sampling.seed),
        iterations: sampled.then_some(c.sampling.iters),
    })
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ValueRow {
    pub label: String,
    pub value: f64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub stderr: Option<f64>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ValueReport {
    pub method: Method,
    pub rows: Vec<ValueRow>,
}

impl Report for ValueReport {
    fn table(&self) -> Table {
        let mc = self.method == Method::MonteCarlo;
        let mut t = Table::new(if mc {
            vec!["label", "value", "stderr"]
        } else {
            vec!["label", "value"]
        });
        for r in &self.rows {
            let mut row = vec![r.label.clone(), sig12(r.value)];
            if mc {
                row.push(opt(r.stderr));
            }
            t.push(row);
        }
        t
    }
}

/// Sorts `(index, value, stderr)` best first, ties on the ranking grid by index.
fn descending(mut rows: Vec<(usize, f64, Option<f64>)>) -> Vec<(usize, f64, Option<f64>)> {
    rows.sort_by(|a, b| order_key(b.1).cmp(&order_key(a.1)).then(a.0.cmp(&b.0)));
    rows
}

pub fn value(a: &ValueArgs) -> CliResult<Produced> {
    let c = &a.common;
    let loaded = load(&c.source())?;
    let game = &loaded.game;
    let rows: Vec<(usize, f64, Option<f64>)> = if c.sampling.mc {
        mc_shapley(game, &sampler(c)?)?
            .iter()
            .enumerate()
            .map(|(i, e)| (i, e.mean, Some(e.stderr)))
            .collect()
    } else {
        let phi = shapley_value(game)?;
        let grand = game.worth(Coalition::full(game.players()));
        let gap = (phi.total() - grand).abs();
        if gap > 1e-9 * grand.abs().max(1.0) {
            return Err(CliError::Internal(format!(
                "values sum to {} but the grand coalition is worth {grand}",
                phi.total()
            )));
        }
        phi.iter().enumerate().map(|(i, &v)| (i, v, None)).collect()
    };
    let report = ValueReport {
        method: method(c.sampling.mc),
        rows: descending(rows)
            .into_iter()
            .map(|(i, value, stderr)| ValueRow {
                label: loaded.universe.label(i).to_string(),
                value,
                stderr,
            })
            .collect(),
    };
    produced(&report, c, loaded, c.sampling.mc)
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TraceRow {
    pub step: usize,
    pub added: String,
    pub group: Vec<String>,
    pub value: f64,
    pub gain: f64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub independent: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub complementarity: Option<f64>,
    pub method: Method,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub stderr: Option<f64>,
}

fn trace(u: &LabeledUniverse, r: &GreedyResult) -> Vec<TraceRow> {
    r.steps
        .iter()
        .map(|s| TraceRow {
            step: s.step,
            added: u.label(s.added).to_string(),
            group: u.names(s.group),
            value: s.value,
            gain: s.gain,
            independent: s.independent,
            complementarity: s.complementarity,
            method: s.method,
            stderr: s.stderr,
        })
        .collect()
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct GroupValueReport {
    pub group: Vec<String>,
    pub value: f64,
    pub method: Method,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub stderr: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub explain: Option<Vec<TraceRow>>,
}

impl Report for GroupValueReport {
    fn table(&self) -> Table {
        match &self.explain {
            None => {
                let mut t = Table::new(vec!["group", "value", "method", "stderr"]);
                t.push(vec![
                    self.group.join(","),
                    sig12(self.value),
                    method_name(self.method).into(),
                    opt(self.stderr),
                ]);
                t
            }
            Some(steps) => {
                let mut t = Table::new(vec![
                    "step",
                    "added",
                    "group",
                    "value",
                    "gain",
                    "independent",
                    "complementarity",
                    "method",
                    "stderr",
                ]);
                for s in steps {
                    t.push(vec![
                        s.step.to_string(),
                        s.added.clone(),
                        s.group.join(","),
                        sig12(s.value),
                        sig12(s.gain),
                        opt(s.independent),
                        opt(s.complementarity),
                        method_name(s.method).into(),
                        opt(s.stderr),
                    ]);
                }
                t
            }
        }
    }
}

pub fn group_value(a: &GroupValueArgs) -> CliResult<Produced> {
    let c = &a.common;
    let loaded = load(&c.source())?;
    let group = loaded.universe.group(&a.group)?;
    let game = &loaded.game;
    let mc = c.sampling.mc;
    let cfg = sampler(c)?;
    let (value, stderr) = if mc {
        let e = mc_group_value(game, group, &cfg)?;
        (e.mean, Some(e.stderr))
    } else {
        (shapley_group_value(game, group)?.value, None)
    };
    let explain = if a.explain {
        let r = explain_group(game, group, mc.then_some(&cfg))?;
        Some(trace(&loaded.universe, &r))
    } else {
        None
    };
    let report = GroupValueReport {
        group: loaded.universe.names(group),
        value,
        method: method(mc),
        stderr,
        explain,
    };
    produced(&report, c, loaded, mc)
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RankRow {
    pub rank: usize,
    pub group: Vec<String>,
    pub value: f64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub stderr: Option<f64>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RankReport {
    pub size: usize,
    pub method: Method,
    pub rows: Vec<RankRow>,
}

impl Report for RankReport {
    fn table(&self) -> Table {
        let mc = self.method == Method::MonteCarlo;
        let mut t = Table::new(if mc {
            vec!["rank", "group", "value", "stderr"]
        } else {
            vec!["rank", "group", "value"]
        });
        for r in &self.rows {
            let mut row = vec![r.rank.to_string(), r.group.join(","), sig12(r.value)];
            if mc {
                row.push(opt(r.stderr));
            }
            t.push(row);
        }
        t
    }
}

pub fn rank(a: &RankArgs) -> CliResult<Produced> {
    let c = &a.common;
    let loaded = load(&c.source())?;
    let mc = c.sampling.mc || a.method == MethodArg::Mc;
    let mut cfg = if mc {
        SearchConfig::monte_carlo(a.size, a.top, sampler(c)?)
    } else {
        SearchConfig::exact(a.size, a.top)
    };
    cfg.budget = a.budget;
    let entries = rank_groups(&loaded.game, &cfg)?;
    let report = RankReport {
        size: a.size,
        method: method(mc),
        rows: entries
            .into_iter()
            .map(|e| RankRow {
                rank: e.rank,
                group: loaded.universe.names(e.group),
                value: e.value,
                stderr: e.stderr,
            })
            .collect(),
    };
    produced(&report, c, loaded, mc)
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ComplementarityReport {
    pub pair: [String; 2],
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub context: Option<Vec<String>>,
    pub value: f64,
}

impl Report for ComplementarityReport {
    fn table(&self) -> Table {
        let mut t = Table::new(vec!["i", "j", "context", "value"]);
        t.push(vec![
            self.pair[0].clone(),
            self.pair[1].clone(),
            self.context.as_ref().map(|c| c.join(",")).unwrap_or_default(),
            sig12(self.value),
        ]);
        t
    }
}

fn pair(u: &LabeledUniverse, spec: &str) -> CliResult<(usize, usize)> {
    let parts: Vec<&str> = spec.split(',').map(str::trim).collect();
    let [a, b] = parts[..] else {
        return Err(CliError::Usage(format!("--pair needs two labels 'i,j', got '{spec}'")));
    };
    let (i, j) = (u.index(a)?, u.index(b)?);
    if i == j {
        return Err(CliError::Usage(format!("--pair needs two different players, got '{a}' twice")));
    }
    Ok((i, j))
}

pub fn complementarity(a: &ComplementarityArgs) -> CliResult<Produced> {
    let c = &a.common;
    if c.sampling.mc {
        return Err(CliError::Usage("complementarity is computed exactly; drop --mc".into()));
    }
    let loaded = load(&c.source())?;
    let u = &loaded.universe;
    let (i, j) = pair(u, &a.pair)?;
    let (value, context) = match &a.context {
        None => (average_complementarity(&loaded.game, i, j)?, None),
        Some(spec) => {
            let ctx = u.group(spec)?;
            if !ctx.contains(i) || ctx.contains(j) {
                return Err(CliError::Usage(format!(
                    "--context must contain '{}' and not '{}'",
                    u.label(i),
                    u.label(j)
                )));
            }
            let merged = merge(&loaded.game, ctx)?;
            let jj = merged.merged_index(j).expect("j is outside the context");
            (average_complementarity(&merged, merged.proxy(), jj)?, Some(u.names(ctx)))
        }
    };
    let report = ComplementarityReport {
        pair: [u.label(i).to_string(), u.label(j).to_string()],
        context,
        value,
    };
    produced(&report, c, loaded, false)
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SegalRow {
    /// `pair` or `entrant`.
    pub test: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub entrant: Option<String>,
    pub verdict: SegalVerdict,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ProfitabilityOutput {
    pub group: Vec<String>,
    pub group_value: f64,
    pub additive_value: f64,
    pub surplus: f64,
    pub derks_tijs_sufficient: bool,
    pub segal: Vec<SegalRow>,
}

fn verdict_name(v: SegalVerdict) -> &'static str {
    match v {
        SegalVerdict::Profitable => "profitable",
        SegalVerdict::Unprofitable => "unprofitable",
        SegalVerdict::Degenerate => "degenerate",
        SegalVerdict::Indeterminate => "indeterminate",
    }
}

impl Report for ProfitabilityOutput {
    fn table(&self) -> Table {
        let mut t = Table::new(vec![
            "group",
            "group_value",
            "additive_value",
            "surplus",
            "derks_tijs_sufficient",
            "segal_pair",
            "segal_entrant",
            "entrant",
        ]);
        let find = |k: &str| self.segal.iter().find(|s| s.test == k);
        t.push(vec![
            self.group.join(","),
            sig12(self.group_value),
            sig12(self.additive_value),
            sig12(self.surplus),
            self.derks_tijs_sufficient.to_string(),
            find("pair").map(|s| verdict_name(s.verdict).into()).unwrap_or_default(),
            find("entrant").map(|s| verdict_name(s.verdict).into()).unwrap_or_default(),
            find("entrant").and_then(|s| s.entrant.clone()).unwrap_or_default(),
        ]);
        t
    }
}

pub fn profitability(a: &ProfitabilityArgs) -> CliResult<Produced> {
    let c = &a.common;
    if c.sampling.mc {
        return Err(CliError::Usage("profitability is computed exactly; drop --mc".into()));
    }
    let loaded = load(&c.source())?;
    let u = &loaded.universe;
    let group = u.group(&a.group)?;
    let game = &loaded.game;
    let r = profit_report(game, group)?;
    let mut segal = Vec::new();
    if group.len() == 2 {
        let mut p = group.players();
        let (i, j) = (p.next().expect("two"), p.next().expect("two"));
        segal.push(SegalRow {
            test: "pair".into(),
            entrant: None,
            verdict: segal_pair_check(game, i, j)?,
        });
    }
    if let Some(e) = &a.entrant {
        let j = u.index(e.trim())?;
        segal.push(SegalRow {
            test: "entrant".into(),
            entrant: Some(u.label(j).to_string()),
            verdict: segal_entrant_check(game, group, j)?,
        });
    }
    let report = ProfitabilityOutput {
        group: u.names(group),
        group_value: r.group_value,
        additive_value: r.additive_value,
        surplus: r.surplus,
        derks_tijs_sufficient: r.derks_tijs_sufficient,
        segal,
    };
    produced(&report, c, loaded, false)
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct WitnessOut {
    pub players: usize,
    pub source: String,
    /// Worths indexed by mask; bit `k` stands for player `k + 1`.
    pub game: Vec<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub other_game: Option<Vec<f64>>,
    pub groups: Vec<Vec<String>>,
    pub members: Vec<String>,
    pub expected: f64,
    pub actual: f64,
    pub detail: String,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PropertyRow {
    pub property: Property,
    pub title: String,
    pub verdict: Verdict,
    pub games: usize,
    pub instances: u64,
    pub tolerance: f64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub witness: Option<WitnessOut>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct AxiomsReport {
    pub functional: String,
    pub suite: SuiteSpec,
    pub results: Vec<PropertyRow>,
}

fn braces(names: &[String]) -> String {
    format!("{{{}}}", names.join(","))
}

impl Report for AxiomsReport {
    fn table(&self) -> Table {
        let mut t = Table::new(vec![
            "property",
            "title",
            "verdict",
            "games",
            "instances",
            "witness_players",
            "witness_game",
            "witness_groups",
            "witness_members",
            "expected",
            "actual",
            "detail",
        ]);
        for r in &self.results {
            let w = r.witness.as_ref();
            t.push(vec![
                r.property.to_string(),
                r.title.clone(),
                match r.verdict {
                    Verdict::Pass => "PASS".into(),
                    Verdict::Fail => "FAIL".into(),
                },
                r.games.to_string(),
                r.instances.to_string(),
                w.map(|w| w.players.to_string()).unwrap_or_default(),
                w.map(|w| w.source.clone()).unwrap_or_default(),
                w.map(|w| w.groups.iter().map(|g| braces(g)).collect::<Vec<_>>().join(" "))
                    .unwrap_or_default(),
                w.map(|w| w.members.join(",")).unwrap_or_default(),
                w.map(|w| sig12(w.expected)).unwrap_or_default(),
                w.map(|w| sig12(w.actual)).unwrap_or_default(),
                w.map(|w| w.detail.clone()).unwrap_or_default(),
            ]);
        }
        t
    }
}

fn property_row(r: PropertyReport) -> PropertyRow {
    let witness = r.witness.map(|w| {
        let u = LabeledUniverse::numbered(w.players);
        WitnessOut {
            players: w.players,
            source: relabel(&w.source),
            game: w.game,
            other_game: w.other_game,
            groups: w.groups.iter().map(|&g| u.names(g)).collect(),
            members: w.members.iter().map(|&i| u.label(i).to_string()).collect(),
            expected: w.expected,
            actual: w.actual,
            detail: relabel(&w.detail),
        }
    });
    PropertyRow {
        property: r.property,
        title: r.property.title().to_string(),
        verdict: r.verdict,
        games: r.games,
        instances: r.instances,
        tolerance: r.tolerance,
        witness,
    }
}

/// Shifts the 0-based player numbers inside `{…}` sets and after the words
/// `player`, `i =`, `j =` and `dummy` to the 1-based labels used on output.
fn relabel(text: &str) -> String {
    let mut out = String::with_capacity(text.len());
    let mut in_set = false;
    let mut chars = text.char_indices().peekable();
    while let Some((pos, ch)) = chars.next() {
        if ch == '{' {
            in_set = true;
        } else if ch == '}' {
            in_set = false;
        }
        if ch.is_ascii_digit() && (in_set || after_player_word(&text[..pos])) {
            let mut end = pos + ch.len_utf8();
            while let Some(&(p, c)) = chars.peek() {
                if c.is_ascii_digit() {
                    end = p + c.len_utf8();
                    chars.next();
                } else {
                    break;
                }
            }
            let k: usize = text[pos..end].parse().expect("digits");
            out.push_str(&(k + 1).to_string());
        } else {
            out.push(ch);
        }
    }
    out
}

fn after_player_word(prefix: &str) -> bool {
    let p = prefix.trim_end();
    if prefix.len() == p.len() && !p.ends_with('=') {
        return false;
    }
    ["player", "i =", "j =", "dummy"].iter().any(|w| p.ends_with(w))
}

pub fn axioms(a: &AxiomsArgs) -> CliResult<Produced> {
    let f = functional_by_name(&a.functional, a.alpha, a.shift)?;
    let mut inputs = Vec::new();
    let suite = match &a.suite {
        Some(path) => {
            let bytes = std::fs::read(path).map_err(|e| CliError::File {
                path: path.clone(),
                message: e.to_string(),
            })?;
            inputs.push(crate::ingest::InputDigest {
                path: path.display().to_string(),
                sha256: {
                    use sha2::{Digest, Sha256};
                    hex::encode(Sha256::digest(&bytes))
                },
            });
            let s: SuiteSpec = serde_json::from_slice(&bytes)
                .map_err(|e| CliError::parse(path, e.line(), e.column(), e.to_string()))?;
            s.validate().map_err(|e| CliError::File {
                path: path.clone(),
                message: e.to_string(),
            })?;
            s
        }
        None => SuiteSpec {
            seed: a.seed,
            ..SuiteSpec::default()
        },
    };
    let reports = match &a.property {
        Some(p) => vec![check_property(f.as_ref(), p.parse()?, &suite)?],
        None => check_all(f.as_ref(), &suite)?,
    };
    let report = AxiomsReport {
        functional: f.name(),
        suite: suite.clone(),
        results: reports.into_iter().map(property_row).collect(),
    };
    Ok(Produced {
        bytes: render(&report, a.output.format)?,
        inputs,
        seed: Some(suite.seed),
        iterations: None,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn witness_text_uses_labels() {
        assert_eq!(
            relabel("balanced contributions fail for C = {0}, i = 1, j = 2"),
            "balanced contributions fail for C = {1}, i = 2, j = 3"
        );
        assert_eq!(relabel("unanimity {0,1}"), "unanimity {1,2}");
        assert_eq!(relabel("random #12 with dummy 3"), "random #12 with dummy 4");
        assert_eq!(relabel("adding player 0 to {} should change"), "adding player 1 to {} should change");
        assert_eq!(relabel("raising v({0,2}) by 0.5 lowers"), "raising v({1,3}) by 0.5 lowers");
    }
}

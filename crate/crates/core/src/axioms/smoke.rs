use serde::Serialize;

use crate::error::Result;

use super::functional::{GroupValueFunctional, ShapleyGroupValue};
use super::properties::{basis_games, check_property, Property, PropertyReport, SuiteSpec};

/// Outcome of checking the characterizing axioms on the unanimity basis.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SmokeReport {
    pub functional: String,
    pub reports: Vec<PropertyReport>,
    /// Largest deviation from `φ^g` over the basis, present only when every
    /// axiom passed.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub max_deviation: Option<f64>,
    pub agrees: Option<bool>,
}

impl SmokeReport {
    pub fn failed(&self) -> Vec<Property> {
        self.reports
            .iter()
            .filter(|r| !r.passed())
            .map(|r| r.property)
            .collect()
    }
}

const AXIOMS: [Property; 4] = [Property::P3, Property::P5, Property::P6, Property::P7];
const MAX_N: usize = 6;
const TOLERANCE: f64 = 1e-9;

/// Checks P3, P5, P6 and P7 on unanimity games up to six players and, if all
/// hold, compares the functional with `φ^g` on the same games.
pub fn characterization_smoke(f: &dyn GroupValueFunctional) -> Result<SmokeReport> {
    let suite = SuiteSpec {
        n_range: [2, MAX_N],
        games_per_n: 0,
        seed: 0,
        tolerance: TOLERANCE,
    };
    let reports = AXIOMS
        .iter()
        .map(|&p| check_property(f, p, &suite))
        .collect::<Result<Vec<_>>>()?;
    let mut out = SmokeReport {
        functional: f.name(),
        reports,
        max_deviation: None,
        agrees: None,
    };
    if out.reports.iter().all(PropertyReport::passed) {
        let mut worst = 0.0f64;
        for n in 2..=MAX_N {
            for g in basis_games(n) {
                let a = f.value_table(&g.game)?;
                let b = ShapleyGroupValue.value_table(&g.game)?;
                for (x, y) in a.iter().zip(&b) {
                    worst = worst.max((x - y).abs());
                }
            }
        }
        out.max_deviation = Some(worst);
        out.agrees = Some(worst <= TOLERANCE);
    }
    Ok(out)
}

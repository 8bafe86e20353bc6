use crate::coalition::Coalition;
use crate::error::{Error, Result};
use crate::game::{check_players, Game};

/// Survey responses: for each respondent, the set of attributes that failed
/// for them and whether they were dissatisfied overall.
#[derive(Clone, Debug, PartialEq)]
pub struct SurveyData {
    attributes: usize,
    failures: Vec<Coalition>,
    dissatisfied: Vec<bool>,
    n_dissatisfied: usize,
}

impl SurveyData {
    /// Builds the data from rows of `(failed attributes, dissatisfied)`.
    pub fn new<I>(attributes: usize, rows: I) -> Result<Self>
    where
        I: IntoIterator<Item = (Coalition, bool)>,
    {
        check_players(attributes)?;
        let (failures, dissatisfied): (Vec<_>, Vec<_>) = rows.into_iter().unzip();
        if let Some((r, f)) = failures
            .iter()
            .enumerate()
            .find(|(_, f)| !f.fits(attributes))
        {
            return Err(Error::MalformedData(format!(
                "respondent {r} lists attributes {f} outside 0..{attributes}"
            )));
        }
        let n_dissatisfied = dissatisfied.iter().filter(|&&d| d).count();
        if n_dissatisfied == 0 || n_dissatisfied == dissatisfied.len() {
            return Err(Error::MalformedData(
                "survey needs both dissatisfied and satisfied respondents".into(),
            ));
        }
        Ok(SurveyData {
            attributes,
            failures,
            dissatisfied,
            n_dissatisfied,
        })
    }

    pub fn attributes(&self) -> usize {
        self.attributes
    }

    pub fn respondents(&self) -> usize {
        self.failures.len()
    }

    /// Share of dissatisfied respondents with a failure in `s`.
    pub fn reach(&self, s: Coalition) -> f64 {
        self.share(s, true)
    }

    /// Share of satisfied respondents with a failure in `s`.
    pub fn noise(&self, s: Coalition) -> f64 {
        self.share(s, false)
    }

    fn share(&self, s: Coalition, group: bool) -> f64 {
        let hits = self
            .failures
            .iter()
            .zip(&self.dissatisfied)
            .filter(|&(f, &d)| d == group && !f.is_disjoint(s))
            .count();
        let size = if group {
            self.n_dissatisfied
        } else {
            self.failures.len() - self.n_dissatisfied
        };
        hits as f64 / size as f64
    }
}

/// Key-driver game: reach minus noise of a set of attributes.
#[derive(Clone, Debug)]
pub struct ReachNoiseGame {
    data: SurveyData,
}

pub fn reach_noise_game(data: &SurveyData) -> ReachNoiseGame {
    ReachNoiseGame { data: data.clone() }
}

impl ReachNoiseGame {
    pub fn data(&self) -> &SurveyData {
        &self.data
    }
}

impl Game for ReachNoiseGame {
    fn players(&self) -> usize {
        self.data.attributes
    }

    fn worth(&self, s: Coalition) -> f64 {
        if s.is_empty() {
            return 0.0;
        }
        self.data.reach(s) - self.data.noise(s)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn row(failed: &[usize], d: bool) -> (Coalition, bool) {
        (Coalition::from_players(failed.iter().copied()), d)
    }

    #[test]
    fn perfect_and_useless_attributes() {
        let data = SurveyData::new(
            2,
            [row(&[0, 1], true), row(&[0, 1], true), row(&[1], false)],
        )
        .unwrap();
        let g = reach_noise_game(&data);
        assert_eq!(g.worth(Coalition::singleton(0)), 1.0);
        assert_eq!(g.worth(Coalition::singleton(1)), 0.0);
        assert_eq!(g.worth(Coalition::EMPTY), 0.0);
    }

    #[test]
    fn toy_table_by_counting() {
        // Respondents (failed attributes; D):
        //   {0}    1      {0,1}  1      {2}  1
        //   {1}    0      {1,2}  0      {}   0
        let data = SurveyData::new(
            3,
            [
                row(&[0], true),
                row(&[0, 1], true),
                row(&[2], true),
                row(&[1], false),
                row(&[1, 2], false),
                row(&[], false),
            ],
        )
        .unwrap();
        let g = reach_noise_game(&data);
        let v = |p: &[usize]| g.worth(Coalition::from_players(p.iter().copied()));
        assert_eq!(v(&[0]), 2.0 / 3.0);
        assert_eq!(v(&[1]), 1.0 / 3.0 - 2.0 / 3.0);
        assert_eq!(v(&[2]), 1.0 / 3.0 - 1.0 / 3.0);
        assert_eq!(v(&[0, 1]), 2.0 / 3.0 - 2.0 / 3.0);
        assert_eq!(v(&[0, 2]), 1.0 - 1.0 / 3.0);
        assert_eq!(v(&[1, 2]), 2.0 / 3.0 - 2.0 / 3.0);
        assert_eq!(v(&[0, 1, 2]), 1.0 - 2.0 / 3.0);
    }

    #[test]
    fn degenerate_outcomes_rejected() {
        assert!(SurveyData::new(1, [row(&[0], true), row(&[], true)]).is_err());
        assert!(SurveyData::new(1, [row(&[0], false)]).is_err());
        assert!(SurveyData::new(1, [row(&[3], true), row(&[], false)]).is_err());
    }
}

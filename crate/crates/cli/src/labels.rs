use std::collections::HashMap;

use groupvalue_core::Coalition;

use crate::error::{CliError, CliResult};

/// Player labels and their dense indices.
#[derive(Clone, Debug, PartialEq)]
pub struct LabeledUniverse {
    labels: Vec<String>,
    index: HashMap<String, usize>,
}

impl LabeledUniverse {
    pub fn new(labels: Vec<String>) -> CliResult<Self> {
        let mut index = HashMap::with_capacity(labels.len());
        for (i, l) in labels.iter().enumerate() {
            if l.is_empty() {
                return Err(CliError::Usage(format!("player {} has an empty label", i + 1)));
            }
            if index.insert(l.clone(), i).is_some() {
                return Err(CliError::Usage(format!("label '{l}' is used twice")));
            }
        }
        Ok(LabeledUniverse { labels, index })
    }

    /// Labels `1..=n`.
    pub fn numbered(n: usize) -> Self {
        Self::new((1..=n).map(|i| i.to_string()).collect()).expect("distinct numerals")
    }

    /// Orders labels numerically when all are integers, otherwise keeps the
    /// order of first appearance.
    pub fn from_appearance(seen: Vec<String>) -> CliResult<Self> {
        let mut labels = seen;
        if labels.iter().all(|l| l.parse::<i128>().is_ok()) {
            labels.sort_by_key(|l| l.parse::<i128>().expect("checked"));
        }
        Self::new(labels)
    }

    pub fn len(&self) -> usize {
        self.labels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.labels.is_empty()
    }

    pub fn label(&self, i: usize) -> &str {
        &self.labels[i]
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn index(&self, label: &str) -> CliResult<usize> {
        self.index.get(label).copied().ok_or_else(|| {
            CliError::Usage(format!("unknown player label '{label}'"))
        })
    }

    /// Parses `a,b,c` into a nonempty coalition.
    pub fn group(&self, spec: &str) -> CliResult<Coalition> {
        let mut c = Coalition::EMPTY;
        for token in spec.split(',').map(str::trim).filter(|t| !t.is_empty()) {
            let i = self.index(token)?;
            if c.contains(i) {
                return Err(CliError::Usage(format!("label '{token}' is listed twice")));
            }
            c = c.with(i);
        }
        if c.is_empty() {
            return Err(CliError::Usage("the group is empty".into()));
        }
        Ok(c)
    }

    pub fn names(&self, c: Coalition) -> Vec<String> {
        c.players().map(|i| self.labels[i].clone()).collect()
    }

    /// `a,b,c` in index order.
    pub fn render(&self, c: Coalition) -> String {
        self.names(c).join(",")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn numeric_labels_sort_numerically() {
        let u = LabeledUniverse::from_appearance(vec!["10".into(), "2".into(), "1".into()]).unwrap();
        assert_eq!(u.labels(), ["1", "2", "10"]);
        let u = LabeledUniverse::from_appearance(vec!["b".into(), "a".into()]).unwrap();
        assert_eq!(u.labels(), ["b", "a"]);
    }

    #[test]
    fn groups_resolve_labels() {
        let u = LabeledUniverse::numbered(5);
        let c = u.group("4, 5").unwrap();
        assert_eq!(c, Coalition::from_players([3, 4]));
        assert_eq!(u.render(c), "4,5");
        assert!(u.group("").is_err());
        assert!(u.group("6").is_err());
        assert!(u.group("1,1").is_err());
    }

    #[test]
    fn duplicate_labels_rejected() {
        assert!(LabeledUniverse::new(vec!["x".into(), "x".into()]).is_err());
    }
}

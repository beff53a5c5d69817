//! Shared report types for the identity/consequence suites.
//!
//! A suite evaluates a list of named checks against an algebra or a state.
//! Each check either passes, fails with the lexicographically first witness
//! tuple, or is skipped because a guard (a required classification flag)
//! does not hold.

use std::fmt;

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ItemStatus {
    Passed,
    Failed { witness: Vec<usize> },
    Skipped { reason: String },
}

#[derive(Debug, Clone)]
pub struct SuiteItem {
    pub id: String,
    pub status: ItemStatus,
    pub note: Option<String>,
}

#[derive(Debug, Clone)]
pub struct SuiteReport {
    pub name: String,
    pub items: Vec<SuiteItem>,
}

impl SuiteReport {
    pub fn new(name: impl Into<String>) -> Self {
        SuiteReport { name: name.into(), items: Vec::new() }
    }

    /// Record a quantified check. `witness` is `None` when the check held on
    /// every tuple, otherwise the first violating tuple in scan order.
    pub fn check(&mut self, id: &str, witness: Option<Vec<usize>>) {
        let status = match witness {
            None => ItemStatus::Passed,
            Some(w) => ItemStatus::Failed { witness: w },
        };
        self.items.push(SuiteItem { id: id.to_string(), status, note: None });
    }

    pub fn check_with_note(&mut self, id: &str, witness: Option<Vec<usize>>, note: &str) {
        self.check(id, witness);
        if let Some(item) = self.items.last_mut() {
            item.note = Some(note.to_string());
        }
    }

    pub fn skip(&mut self, id: &str, reason: &str) {
        self.items.push(SuiteItem {
            id: id.to_string(),
            status: ItemStatus::Skipped { reason: reason.to_string() },
            note: None,
        });
    }

    pub fn passed(&self) -> bool {
        !self.items.iter().any(|i| matches!(i.status, ItemStatus::Failed { .. }))
    }

    pub fn failures(&self) -> Vec<&SuiteItem> {
        self.items
            .iter()
            .filter(|i| matches!(i.status, ItemStatus::Failed { .. }))
            .collect()
    }

    pub fn item(&self, id: &str) -> Option<&SuiteItem> {
        self.items.iter().find(|i| i.id == id)
    }

    /// Number of items that actually ran (passed or failed).
    pub fn ran(&self) -> usize {
        self.items
            .iter()
            .filter(|i| !matches!(i.status, ItemStatus::Skipped { .. }))
            .count()
    }
}

impl fmt::Display for SuiteReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "suite {}", self.name)?;
        for item in &self.items {
            match &item.status {
                ItemStatus::Passed => write!(f, "  pass {}", item.id)?,
                ItemStatus::Failed { witness } => {
                    write!(f, "  FAIL {} witness {:?}", item.id, witness)?
                }
                ItemStatus::Skipped { reason } => {
                    write!(f, "  skip {} ({})", item.id, reason)?
                }
            }
            if let Some(note) = &item.note {
                write!(f, " [{}]", note)?;
            }
            writeln!(f)?;
        }
        Ok(())
    }
}

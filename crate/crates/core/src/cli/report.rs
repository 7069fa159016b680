//! Tabular command output with TSV and JSON encodings of the same data.

use serde::{Deserialize, Serialize};

use crate::error::Result;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Section {
    pub name: String,
    pub columns: Vec<String>,
    pub rows: Vec<Vec<String>>,
}

impl Section {
    pub fn new(name: &str, columns: &[&str]) -> Self {
        Section {
            name: name.to_string(),
            columns: columns.iter().map(|c| c.to_string()).collect(),
            rows: vec![],
        }
    }

    pub fn push(&mut self, row: Vec<String>) {
        debug_assert_eq!(row.len(), self.columns.len());
        self.rows.push(row);
    }
}

/// The result of one command. Rows are emitted in the order pushed, which
/// the commands keep sorted by `(|d|, lex)`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Report {
    pub command: String,
    pub notes: Vec<String>,
    pub sections: Vec<Section>,
}

impl Report {
    pub fn new(command: &str) -> Self {
        Report {
            command: command.to_string(),
            notes: vec![],
            sections: vec![],
        }
    }

    pub fn note(&mut self, text: impl Into<String>) {
        self.notes.push(text.into());
    }

    /// Comment lines start with `#`; each section opens with its name and
    /// column names, then one tab-separated line per row.
    pub fn to_tsv(&self) -> String {
        let mut out = format!("# {}\n", self.command);
        for n in &self.notes {
            out.push_str(&format!("# {n}\n"));
        }
        for s in &self.sections {
            out.push_str(&format!("# [{}] {}\n", s.name, s.columns.join("\t")));
            for r in &s.rows {
                out.push_str(&r.join("\t"));
                out.push('\n');
            }
        }
        out
    }

    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("report serialises");
        s.push('\n');
        s
    }

    pub fn from_json(text: &str) -> Result<Self> {
        Ok(serde_json::from_str(text)?)
    }
}

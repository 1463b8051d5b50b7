//! Result records printed by the decision commands.

use std::fmt::Write as _;

use kpeaked::control::Witness;
use kpeaked::Election;
use serde::Serialize;

#[derive(Clone, Copy, Debug, PartialEq, Eq, clap::ValueEnum)]
pub enum Format {
    Text,
    JsonLines,
}

#[derive(Serialize)]
pub struct VoteRecord {
    pub count: usize,
    pub ranking: Vec<String>,
}

#[derive(Serialize)]
#[serde(rename_all = "lowercase")]
pub enum WitnessRecord {
    Votes(Vec<VoteRecord>),
    Candidates(Vec<String>),
    Sets(Vec<Vec<usize>>),
}

impl WitnessRecord {
    pub fn from_witness(w: &Witness, e: &Election) -> Self {
        match w {
            Witness::Votes(votes) => WitnessRecord::Votes(
                votes
                    .entries()
                    .iter()
                    .map(|(v, n)| VoteRecord {
                        count: *n,
                        ranking: v.order().iter().map(|&c| e.name(c).to_string()).collect(),
                    })
                    .collect(),
            ),
            Witness::Candidates(cs) => {
                WitnessRecord::Candidates(cs.iter().map(|&c| e.name(c).to_string()).collect())
            }
        }
    }

    fn text(&self) -> String {
        match self {
            WitnessRecord::Votes(vs) => vs
                .iter()
                .map(|v| format!("{}: {}", v.count, v.ranking.join(" > ")))
                .collect::<Vec<_>>()
                .join(" | "),
            WitnessRecord::Candidates(cs) => cs.join(" "),
            WitnessRecord::Sets(sets) => sets
                .iter()
                .map(|s| s.iter().map(ToString::to_string).collect::<Vec<_>>().join(" "))
                .collect::<Vec<_>>()
                .join(" | "),
        }
    }
}

/// Field order is part of the output format.
#[derive(Serialize)]
pub struct ResultRecord {
    pub problem: String,
    pub algorithm: String,
    pub answer: &'static str,
    pub witness: Option<WitnessRecord>,
    pub budget_used: usize,
    pub nodes: u64,
    /// Only with `--timing`, so default output stays reproducible.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub ms: Option<f64>,
}

impl ResultRecord {
    pub fn render(&self, format: Format) -> String {
        match format {
            Format::JsonLines => {
                let mut s = serde_json::to_string(self).expect("record serializes");
                s.push('\n');
                s
            }
            Format::Text => {
                let mut s = String::new();
                let _ = writeln!(s, "problem: {}", self.problem);
                let _ = writeln!(s, "algorithm: {}", self.algorithm);
                let _ = writeln!(s, "answer: {}", self.answer);
                match &self.witness {
                    Some(w) => {
                        let body = w.text();
                        let body = if body.is_empty() { "(empty)".to_string() } else { body };
                        let _ = writeln!(s, "witness: {body}");
                    }
                    None => s.push_str("witness: none\n"),
                }
                let _ = writeln!(s, "budget_used: {}", self.budget_used);
                let _ = writeln!(s, "nodes: {}", self.nodes);
                if let Some(ms) = self.ms {
                    let _ = writeln!(s, "ms: {ms:.3}");
                }
                s
            }
        }
    }
}

pub fn answer(yes: bool) -> &'static str {
    if yes {
        "yes"
    } else {
        "no"
    }
}

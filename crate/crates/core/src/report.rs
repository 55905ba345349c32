use serde::{Deserialize, Serialize};

use crate::instance::Solution;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "status", content = "solution", rename_all = "snake_case")]
pub enum Outcome {
    Solved(Solution),
    /// The search finished its budget without a solution. For exhaustive
    /// solvers this certifies that none exists.
    NoSolutionFound,
    /// A round gave up early, e.g. a filtered list exceeded its size cap.
    RetryableFailure,
}

impl Outcome {
    pub fn solution(&self) -> Option<&Solution> {
        match self {
            Outcome::Solved(s) => Some(s),
            _ => None,
        }
    }

    pub fn is_solved(&self) -> bool {
        matches!(self, Outcome::Solved(_))
    }

    pub fn label(&self) -> &'static str {
        match self {
            Outcome::Solved(_) => "solved",
            Outcome::NoSolutionFound => "no_solution_found",
            Outcome::RetryableFailure => "retryable_failure",
        }
    }
}

/// Counters collected by a solver run. Deterministic for a fixed seed.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct SolverStats {
    /// Randomized rounds executed, summed over profiles.
    pub rounds: u64,
    /// Profiles (or profile classes) attempted.
    pub profiles: u64,
    /// Largest list built in any round.
    pub max_list: u64,
    /// Prime used by the most recent filtered round.
    pub last_prime: Option<u64>,
    /// Rounds abandoned because a list exceeded its cap.
    pub cap_hits: u64,
    /// Candidate pairs inspected after a match.
    pub candidates: u64,
}

impl SolverStats {
    pub fn absorb(&mut self, other: &SolverStats) {
        self.rounds += other.rounds;
        self.profiles += other.profiles;
        self.max_list = self.max_list.max(other.max_list);
        if other.last_prime.is_some() {
            self.last_prime = other.last_prime;
        }
        self.cap_hits += other.cap_hits;
        self.candidates += other.candidates;
    }

    pub(crate) fn saw_list(&mut self, len: usize) {
        self.max_list = self.max_list.max(len as u64);
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SolverReport {
    pub algorithm: String,
    pub outcome: Outcome,
    pub stats: SolverStats,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub note: Option<String>,
}

impl SolverReport {
    pub fn new(algorithm: &str, outcome: Outcome, stats: SolverStats) -> Self {
        Self { algorithm: algorithm.to_string(), outcome, stats, note: None }
    }

    pub fn with_note(mut self, note: &str) -> Self {
        self.note = Some(note.to_string());
        self
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn outcome_json() {
        let o = Outcome::Solved(Solution::new(vec![1, -1]));
        assert_eq!(serde_json::to_string(&o).unwrap(), r#"{"status":"solved","solution":{"c":[1,-1]}}"#);
        assert_eq!(serde_json::to_string(&Outcome::NoSolutionFound).unwrap(), r#"{"status":"no_solution_found"}"#);
    }

    #[test]
    fn absorb_accumulates() {
        let mut a = SolverStats { rounds: 2, max_list: 10, ..Default::default() };
        a.absorb(&SolverStats { rounds: 3, max_list: 4, last_prime: Some(7), ..Default::default() });
        assert_eq!(a.rounds, 5);
        assert_eq!(a.max_list, 10);
        assert_eq!(a.last_prime, Some(7));
    }
}

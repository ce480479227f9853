use serde::{Deserialize, Serialize};

/// Oracle-call counters for a single run.
///
/// Three kinds of cost are tracked separately:
/// - `quantum_oracle_queries`: coherent applications of a marking oracle
///   (one per Grover iteration in online search, `2N` per membership-oracle
///   application in version-space search);
/// - `classical_oracle_queries`: evaluations of the misclassification
///   predicate on one concrete example;
/// - `composite_oracle_queries`: applications of the version-space membership
///   oracle, each of which is also billed as `2N` quantum queries.
///
/// Counters only ever increase.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct QueryLedger {
    quantum_oracle_queries: u64,
    classical_oracle_queries: u64,
    composite_oracle_queries: u64,
}

/// Per-operation prices charged to a [`QueryLedger`] during a search.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct OracleCost {
    pub quantum_per_iteration: u64,
    pub composite_per_iteration: u64,
    pub classical_per_check: u64,
}

impl OracleCost {
    /// One marking-oracle call per Grover iteration, one predicate evaluation
    /// per classical check.
    pub const UNIT: OracleCost = OracleCost {
        quantum_per_iteration: 1,
        composite_per_iteration: 0,
        classical_per_check: 1,
    };

    /// Pricing for search over candidate hyperplanes against `n` examples:
    /// each iteration applies the membership oracle once, which costs `2n`
    /// half-space tests; each classical check is a full pass over the data.
    pub fn version_space(n: usize) -> Self {
        let n = n as u64;
        OracleCost {
            quantum_per_iteration: 2 * n,
            composite_per_iteration: 1,
            classical_per_check: n,
        }
    }
}

impl QueryLedger {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn quantum_oracle_queries(&self) -> u64 {
        self.quantum_oracle_queries
    }

    pub fn classical_oracle_queries(&self) -> u64 {
        self.classical_oracle_queries
    }

    pub fn composite_oracle_queries(&self) -> u64 {
        self.composite_oracle_queries
    }

    pub fn charge_quantum(&mut self, count: u64) {
        self.quantum_oracle_queries += count;
    }

    pub fn charge_classical(&mut self, count: u64) {
        self.classical_oracle_queries += count;
    }

    /// Charges `iterations` Grover iterations at the given price.
    pub fn charge_iterations(&mut self, iterations: u64, cost: OracleCost) {
        self.quantum_oracle_queries += iterations * cost.quantum_per_iteration;
        self.composite_oracle_queries += iterations * cost.composite_per_iteration;
    }

    pub fn charge_check(&mut self, cost: OracleCost) {
        self.classical_oracle_queries += cost.classical_per_check;
    }

    /// Adds every counter of `other` into `self`.
    pub fn absorb(&mut self, other: &QueryLedger) {
        self.quantum_oracle_queries += other.quantum_oracle_queries;
        self.classical_oracle_queries += other.classical_oracle_queries;
        self.composite_oracle_queries += other.composite_oracle_queries;
    }
}

use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Relation {
    Eq,
    Le,
}

/// One integer identity or inequality with both sides evaluated.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct IdentityCheck {
    pub name: String,
    pub lhs: i64,
    pub rhs: i64,
    pub relation: Relation,
}

impl IdentityCheck {
    pub fn eq(name: impl Into<String>, lhs: i64, rhs: i64) -> Self {
        IdentityCheck {
            name: name.into(),
            lhs,
            rhs,
            relation: Relation::Eq,
        }
    }

    pub fn le(name: impl Into<String>, lhs: i64, rhs: i64) -> Self {
        IdentityCheck {
            name: name.into(),
            lhs,
            rhs,
            relation: Relation::Le,
        }
    }

    pub fn holds(&self) -> bool {
        match self.relation {
            Relation::Eq => self.lhs == self.rhs,
            Relation::Le => self.lhs <= self.rhs,
        }
    }
}

impl std::fmt::Display for IdentityCheck {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let op = match self.relation {
            Relation::Eq => "==",
            Relation::Le => "<=",
        };
        let status = if self.holds() { "ok" } else { "FAIL" };
        write!(
            f,
            "{status:4} {}: {} {op} {}",
            self.name, self.lhs, self.rhs
        )
    }
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct CheckReport {
    pub checks: Vec<IdentityCheck>,
}

impl CheckReport {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn check_eq(&mut self, name: impl Into<String>, lhs: i64, rhs: i64) {
        self.checks.push(IdentityCheck::eq(name, lhs, rhs));
    }

    pub fn check_le(&mut self, name: impl Into<String>, lhs: i64, rhs: i64) {
        self.checks.push(IdentityCheck::le(name, lhs, rhs));
    }

    pub fn extend(&mut self, prefix: &str, other: CheckReport) {
        for mut c in other.checks {
            c.name = format!("{prefix}{}", c.name);
            self.checks.push(c);
        }
    }

    pub fn all_hold(&self) -> bool {
        self.checks.iter().all(IdentityCheck::holds)
    }

    pub fn failures(&self) -> impl Iterator<Item = &IdentityCheck> {
        self.checks.iter().filter(|c| !c.holds())
    }

    pub fn len(&self) -> usize {
        self.checks.len()
    }

    pub fn is_empty(&self) -> bool {
        self.checks.is_empty()
    }
}

impl std::fmt::Display for CheckReport {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        for c in &self.checks {
            writeln!(f, "{c}")?;
        }
        Ok(())
    }
}

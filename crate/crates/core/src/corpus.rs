//! Bundled domain and problem files.

use crate::pddlx::{self, DomainDef, ParseError, ProblemDef};

/// One bundled domain with its sample problem.
#[derive(Debug, Clone, Copy)]
pub struct Entry {
    pub name: &'static str,
    pub domain: &'static str,
    pub problem: &'static str,
}

pub const TOY: Entry = Entry {
    name: "toy",
    domain: include_str!("../data/toy.domain.pddlx"),
    problem: include_str!("../data/toy.problem.pddlx"),
};

pub const OCEAN: Entry = Entry {
    name: "ocean",
    domain: include_str!("../data/ocean.domain.pddlx"),
    problem: include_str!("../data/ocean.problem.pddlx"),
};

pub const AUV: Entry = Entry {
    name: "auv",
    domain: include_str!("../data/auv.domain.pddlx"),
    problem: include_str!("../data/auv.problem.pddlx"),
};

pub const TAXI: Entry = Entry {
    name: "taxi",
    domain: include_str!("../data/taxi.domain.pddlx"),
    problem: include_str!("../data/taxi.problem.pddlx"),
};

pub const ROVER: Entry = Entry {
    name: "rover",
    domain: include_str!("../data/rover.domain.pddlx"),
    problem: include_str!("../data/rover.problem.pddlx"),
};

pub const ALL: [Entry; 5] = [TOY, OCEAN, AUV, TAXI, ROVER];

pub fn by_name(name: &str) -> Option<Entry> {
    ALL.iter().copied().find(|e| e.name.eq_ignore_ascii_case(name))
}

impl Entry {
    pub fn parse(&self) -> Result<(DomainDef, ProblemDef), ParseError> {
        let d = pddlx::parse_domain(self.domain)?;
        let p = pddlx::parse_problem(self.problem, &d)?;
        Ok((d, p))
    }

    pub fn domain_def(&self) -> DomainDef {
        pddlx::parse_domain(self.domain).expect("bundled domain parses")
    }
}

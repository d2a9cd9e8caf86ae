//! Check reports and their text and TSV renderings.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Property {
    Hsd,
    SecondIso,
    Dpn,
    DiExact,
    Modular,
    Distributive,
    Stability,
    CokerSquare,
    PropNsub,
}

impl Property {
    pub const CLI: [Property; 7] = [
        Property::Hsd,
        Property::SecondIso,
        Property::Dpn,
        Property::DiExact,
        Property::Modular,
        Property::Distributive,
        Property::Stability,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Property::Hsd => "hsd",
            Property::SecondIso => "secondiso",
            Property::Dpn => "dpn",
            Property::DiExact => "diexact",
            Property::Modular => "modular",
            Property::Distributive => "distributive",
            Property::Stability => "stability",
            Property::CokerSquare => "cokersquare",
            Property::PropNsub => "propnsub",
        }
    }
}

impl fmt::Display for Property {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Property {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        [
            Property::Hsd,
            Property::SecondIso,
            Property::Dpn,
            Property::DiExact,
            Property::Modular,
            Property::Distributive,
            Property::Stability,
            Property::CokerSquare,
            Property::PropNsub,
        ]
        .into_iter()
        .find(|p| p.name() == s)
        .ok_or_else(|| format!("unknown property {s:?}"))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Status {
    Pass,
    Fail,
}

impl Status {
    pub fn from_ok(ok: bool) -> Self {
        if ok {
            Status::Pass
        } else {
            Status::Fail
        }
    }
}

impl fmt::Display for Status {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Status::Pass => "pass",
            Status::Fail => "fail",
        })
    }
}

/// A failing case: positions in the enumerated `nsub` list (or lattice elements), their
/// display names and canonical codes, and the condition that failed.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Witness {
    pub indices: Vec<usize>,
    pub names: Vec<String>,
    pub codes: Vec<String>,
    pub condition: String,
}

impl Witness {
    pub fn encoded(&self) -> String {
        self.codes.join("|")
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CheckReport {
    pub property: Property,
    pub object: String,
    pub depth: usize,
    pub status: Status,
    pub witnesses: Vec<Witness>,
    pub cases: usize,
    pub stats: BTreeMap<String, usize>,
}

impl CheckReport {
    pub fn new(property: Property, object: impl Into<String>, depth: usize) -> Self {
        CheckReport {
            property,
            object: object.into(),
            depth,
            status: Status::Pass,
            witnesses: Vec::new(),
            cases: 0,
            stats: BTreeMap::new(),
        }
    }

    pub fn fail(&mut self, w: Witness) {
        self.status = Status::Fail;
        self.witnesses.push(w);
    }

    pub fn bump(&mut self, stat: &str) {
        *self.stats.entry(stat.to_string()).or_default() += 1;
    }

    pub fn passed(&self) -> bool {
        self.status == Status::Pass
    }

    pub fn result_line(&self) -> String {
        let witness = self.witnesses.first().map_or_else(|| "-".to_string(), Witness::encoded);
        format!(
            "RESULT\tobject={}\tproperty={}\tdepth={}\tstatus={}\tcases={}\twitness={}",
            self.object, self.property, self.depth, self.status, self.cases, witness
        )
    }

    pub fn text(&self) -> String {
        let mut out = format!(
            "{} {} at depth {}: {} ({} cases)",
            self.property,
            self.object,
            self.depth,
            self.status.to_string().to_uppercase(),
            self.cases
        );
        if !self.stats.is_empty() {
            let stats: Vec<String> = self.stats.iter().map(|(k, v)| format!("{k}={v}")).collect();
            out.push_str(&format!(" [{}]", stats.join(", ")));
        }
        for w in &self.witnesses {
            out.push_str(&format!("\n  witness ({}): {}", w.names.join(", "), w.condition));
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn result_line_shape() {
        let mut r = CheckReport::new(Property::Dpn, "N5", 0);
        r.cases = 25;
        assert_eq!(r.result_line(), "RESULT\tobject=N5\tproperty=dpn\tdepth=0\tstatus=pass\tcases=25\twitness=-");
        r.fail(Witness {
            indices: vec![3, 2],
            names: vec!["↓B".into(), "↓D".into()],
            codes: vec!["{0,C,B}".into(), "{0,D}".into()],
            condition: "x".into(),
        });
        assert!(r.result_line().ends_with("status=fail\tcases=25\twitness={0,C,B}|{0,D}"));
    }

    #[test]
    fn property_names_round_trip() {
        for p in Property::CLI {
            assert_eq!(p.name().parse::<Property>().unwrap(), p);
        }
        assert!("nope".parse::<Property>().is_err());
    }
}

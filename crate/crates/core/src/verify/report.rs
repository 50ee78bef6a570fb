use std::collections::BTreeMap;
use std::fmt::Write;

/// One line of a verification report.
#[derive(Clone, Debug, PartialEq)]
pub struct ReportRow {
    pub check: String,
    pub param: String,
    pub m: Option<u32>,
    pub value: f64,
    /// `None` for pure observations.
    pub bound: Option<f64>,
    pub pass: bool,
}

impl ReportRow {
    /// A row that passes when `value <= bound`.
    pub fn at_most(check: &str, param: impl Into<String>, m: Option<u32>, value: f64, bound: f64) -> Self {
        Self {
            check: check.to_string(),
            param: param.into(),
            m,
            value,
            bound: Some(bound),
            pass: value <= bound,
        }
    }

    /// A recorded value without a pass criterion.
    pub fn observation(check: &str, param: impl Into<String>, m: Option<u32>, value: f64) -> Self {
        Self {
            check: check.to_string(),
            param: param.into(),
            m,
            value,
            bound: None,
            pass: true,
        }
    }
}

#[derive(Clone, Debug, Default, PartialEq)]
pub struct Report {
    pub rows: Vec<ReportRow>,
    pub notes: Vec<String>,
}

/// Floats with 17 significant digits.
pub fn format_float(x: f64) -> String {
    if x.is_finite() {
        format!("{x:.16e}")
    } else {
        x.to_string()
    }
}

impl Report {
    pub fn push(&mut self, row: ReportRow) {
        self.rows.push(row);
    }

    pub fn note(&mut self, note: impl Into<String>) {
        self.notes.push(note.into());
    }

    pub fn extend(&mut self, other: Report) {
        self.rows.extend(other.rows);
        self.notes.extend(other.notes);
    }

    pub fn passed(&self) -> bool {
        self.rows.iter().all(|r| r.pass)
    }

    pub fn failures(&self) -> impl Iterator<Item = &ReportRow> {
        self.rows.iter().filter(|r| !r.pass)
    }

    /// CSV with header `check,param,m,value,bound,pass`.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("check,param,m,value,bound,pass\n");
        for r in &self.rows {
            let m = r.m.map(|m| m.to_string()).unwrap_or_default();
            let bound = r.bound.map(format_float).unwrap_or_default();
            writeln!(out, "{},{},{m},{},{bound},{}", r.check, r.param, format_float(r.value), r.pass).unwrap();
        }
        out
    }

    /// Pass counts per check followed by failures and notes.
    pub fn summary(&self) -> String {
        let mut counts: BTreeMap<&str, (usize, usize)> = BTreeMap::new();
        for r in &self.rows {
            let e = counts.entry(&r.check).or_default();
            e.1 += 1;
            if r.pass {
                e.0 += 1;
            }
        }
        let mut out = String::new();
        for (check, (ok, total)) in &counts {
            writeln!(out, "{check:<12} {ok}/{total} passed").unwrap();
        }
        for r in self.failures() {
            let m = r.m.map(|m| format!(" m={m}")).unwrap_or_default();
            let bound = r.bound.map(|b| format!(" > {b:e}")).unwrap_or_default();
            writeln!(out, "FAIL {} {}{m}: {:e}{bound}", r.check, r.param, r.value).unwrap();
        }
        for n in &self.notes {
            writeln!(out, "note: {n}").unwrap();
        }
        out
    }
}

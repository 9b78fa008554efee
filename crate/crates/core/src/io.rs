//! Structure files, report rendering and DOT export.
//!
//! # Structure file grammar
//!
//! ```text
//! file      := section*
//! section   := key ':' value
//! key       := 'elements' | 'covers' | 'leq' | 'ortho' | 'mul' | 'unit' | 'dualizing'
//! value     := atom | '[' (value (',' value)* ','?)? ']'
//! atom      := any run of characters other than whitespace , [ ] : #
//! ```
//!
//! `#` starts a comment that runs to the end of the line. Whitespace and
//! line breaks are free, so a list may span several lines. Sections appear in
//! the order `elements`, then at most one of `covers` / `leq`, then `ortho`,
//! `mul`, `unit`, `dualizing`; only `elements` is required.
//!
//! - `elements: [0, a, b, 1]` names the elements; later sections refer to
//!   them by 0-based index.
//! - `covers: [[i, j], ...]` lists pairs `i < j`; the order is their
//!   reflexive-transitive closure. `leq: [[i, j], ...]` lists the relation
//!   itself (reflexive pairs may be omitted, transitivity is not added).
//!   With neither, the order is discrete.
//! - `ortho: [k0, k1, ...]` gives `i ↦ k_i`.
//! - `mul: [[...], ...]` is the multiplication table, row `i` holding
//!   `i ⊙ 0, i ⊙ 1, ...`.
//! - `unit: i` and `dualizing: i` name distinguished elements.
//!
//! ```text
//! # the four-element Boolean algebra with its meet
//! elements: [0, a, b, 1]
//! covers: [[0, 1], [0, 2], [1, 3], [2, 3]]
//! ortho: [3, 2, 1, 0]
//! mul: [[0, 0, 0, 0],
//!       [0, 1, 0, 1],
//!       [0, 0, 2, 2],
//!       [0, 1, 2, 3]]
//! unit: 3
//! ```

use std::collections::BTreeMap;
use std::fmt::Write as _;

use thiserror::Error;

use crate::girard::{check_downset_unit, girard_reports, is_cyclic, is_dualizing};
use crate::order::{check_inversion, compute_lattice, hasse_covers, is_boolean, is_complemented, is_distributive};
use crate::order::{FiniteLattice, FinitePoset, LatticeError, PosetError, UnaryOrderMap};
use crate::ortho::{check_compatibility_symmetric, check_ortholattice, check_orthomodular, is_orthomodular};
use crate::ortho::{OrthoError, OrthoLattice};
use crate::report::LawReport;
use crate::residuation::{check_associative, check_integral_consequences, check_residuated};
use crate::residuation::{MulTable, ResiduatedStructure, ResiduationError};

const KEYS: [&str; 7] = ["elements", "covers", "leq", "ortho", "mul", "unit", "dualizing"];

#[derive(Debug, Error, PartialEq, Eq)]
pub enum ParseError {
    #[error("line {line}: expected {expected}, found {found}")]
    Syntax { line: usize, expected: String, found: String },
    #[error("line {line}: {what} {value} out of range for {n} elements")]
    Range { line: usize, what: &'static str, value: usize, n: usize },
}

impl ParseError {
    pub fn line(&self) -> usize {
        match self {
            ParseError::Syntax { line, .. } | ParseError::Range { line, .. } => *line,
        }
    }
}

/// The structure a file describes does not satisfy what a command needs.
#[derive(Debug, Error)]
pub enum StructureError {
    #[error("order: {0}")]
    Poset(#[from] PosetError),
    #[error("lattice: {0}")]
    Lattice(#[from] LatticeError),
    #[error("ortho: {0}")]
    Ortho(#[from] OrthoError),
    #[error("multiplication: {0}")]
    Residuation(#[from] ResiduationError),
    #[error("missing section `{0}`")]
    Missing(&'static str),
    #[error("ortho map: {0}")]
    OrthoMap(PosetError),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum OrderSpec {
    Discrete,
    Covers(Vec<(usize, usize)>),
    Leq(Vec<(usize, usize)>),
}

/// A parsed structure file. Source lines are kept for messages and do not
/// take part in equality.
#[derive(Clone, Debug)]
pub struct StructureFile {
    pub elements: Vec<String>,
    pub order: OrderSpec,
    pub ortho: Option<Vec<usize>>,
    pub mul: Option<Vec<Vec<usize>>>,
    pub unit: Option<usize>,
    pub dualizing: Option<usize>,
    /// Line on which each present section starts.
    pub lines: BTreeMap<String, usize>,
}

impl PartialEq for StructureFile {
    fn eq(&self, other: &Self) -> bool {
        self.elements == other.elements
            && self.order == other.order
            && self.ortho == other.ortho
            && self.mul == other.mul
            && self.unit == other.unit
            && self.dualizing == other.dualizing
    }
}

#[derive(Clone, Debug, PartialEq)]
enum Tok {
    Open,
    Close,
    Comma,
    Colon,
    Atom(String),
}

impl Tok {
    fn describe(&self) -> String {
        match self {
            Tok::Open => "`[`".into(),
            Tok::Close => "`]`".into(),
            Tok::Comma => "`,`".into(),
            Tok::Colon => "`:`".into(),
            Tok::Atom(a) => format!("`{a}`"),
        }
    }
}

fn lex(text: &str) -> Vec<(Tok, usize)> {
    let mut out = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        let line = i + 1;
        let content = raw.split('#').next().unwrap_or("");
        let mut atom = String::new();
        let flush = |atom: &mut String, out: &mut Vec<(Tok, usize)>| {
            if !atom.is_empty() {
                out.push((Tok::Atom(std::mem::take(atom)), line));
            }
        };
        for c in content.chars() {
            let tok = match c {
                '[' => Some(Tok::Open),
                ']' => Some(Tok::Close),
                ',' => Some(Tok::Comma),
                ':' => Some(Tok::Colon),
                c if c.is_whitespace() => {
                    flush(&mut atom, &mut out);
                    continue;
                }
                c => {
                    atom.push(c);
                    None
                }
            };
            if let Some(t) = tok {
                flush(&mut atom, &mut out);
                out.push((t, line));
            }
        }
        flush(&mut atom, &mut out);
    }
    out
}

#[derive(Clone, Debug)]
enum Value {
    Atom(String, usize),
    List(Vec<Value>, usize),
}

struct Parser {
    toks: Vec<(Tok, usize)>,
    pos: usize,
    last_line: usize,
}

impl Parser {
    fn peek(&self) -> Option<&(Tok, usize)> {
        self.toks.get(self.pos)
    }

    fn next(&mut self) -> Option<(Tok, usize)> {
        let t = self.toks.get(self.pos).cloned();
        if t.is_some() {
            self.pos += 1;
        }
        t
    }

    fn error(&self, expected: impl Into<String>, got: Option<&(Tok, usize)>) -> ParseError {
        match got {
            Some((t, line)) => ParseError::Syntax {
                line: *line,
                expected: expected.into(),
                found: t.describe(),
            },
            None => ParseError::Syntax {
                line: self.last_line,
                expected: expected.into(),
                found: "end of file".into(),
            },
        }
    }

    fn value(&mut self) -> Result<Value, ParseError> {
        match self.next() {
            Some((Tok::Atom(a), line)) => Ok(Value::Atom(a, line)),
            Some((Tok::Open, line)) => {
                let mut items = Vec::new();
                loop {
                    if let Some((Tok::Close, _)) = self.peek() {
                        self.next();
                        return Ok(Value::List(items, line));
                    }
                    items.push(self.value()?);
                    match self.next() {
                        Some((Tok::Comma, _)) => {}
                        Some((Tok::Close, _)) => return Ok(Value::List(items, line)),
                        other => return Err(self.error("`,` or `]`", other.as_ref())),
                    }
                }
            }
            other => Err(self.error("a value", other.as_ref())),
        }
    }
}

fn syntax(line: usize, expected: impl Into<String>, found: impl Into<String>) -> ParseError {
    ParseError::Syntax {
        line,
        expected: expected.into(),
        found: found.into(),
    }
}

fn list(v: Value, what: &str) -> Result<(Vec<Value>, usize), ParseError> {
    match v {
        Value::List(items, line) => Ok((items, line)),
        Value::Atom(a, line) => Err(syntax(line, format!("{what} list"), format!("`{a}`"))),
    }
}

fn index(v: &Value, what: &'static str, n: usize) -> Result<usize, ParseError> {
    match v {
        Value::Atom(a, line) => {
            let k: usize = a.parse().map_err(|_| syntax(*line, format!("{what} index"), format!("`{a}`")))?;
            if k >= n {
                return Err(ParseError::Range {
                    line: *line,
                    what,
                    value: k,
                    n,
                });
            }
            Ok(k)
        }
        Value::List(_, line) => Err(syntax(*line, format!("{what} index"), "a list")),
    }
}

fn index_list(v: Value, what: &'static str, n: usize, len: Option<usize>) -> Result<Vec<usize>, ParseError> {
    let (items, line) = list(v, what)?;
    if let Some(len) = len {
        if items.len() != len {
            return Err(syntax(line, format!("{what} of {len} entries"), format!("{} entries", items.len())));
        }
    }
    items.iter().map(|x| index(x, what, n)).collect()
}

fn pairs(v: Value, what: &'static str, n: usize) -> Result<Vec<(usize, usize)>, ParseError> {
    let (items, _) = list(v, what)?;
    items
        .into_iter()
        .map(|p| {
            let ix = index_list(p, what, n, Some(2))?;
            Ok((ix[0], ix[1]))
        })
        .collect()
}

/// Parses a structure file, checking shapes and index ranges.
pub fn parse(text: &str) -> Result<StructureFile, ParseError> {
    let toks = lex(text);
    let last_line = toks.last().map_or(1, |t| t.1);
    let mut p = Parser { toks, pos: 0, last_line };
    let mut sections: Vec<(String, Value, usize)> = Vec::new();
    let mut rank = 0;
    while let Some(t) = p.next() {
        let (key, line) = match t {
            (Tok::Atom(k), line) => (k, line),
            other => return Err(p.error("a section key", Some(&other))),
        };
        let Some(pos) = KEYS.iter().position(|k| *k == key) else {
            return Err(syntax(line, format!("one of {}", KEYS.join(", ")), format!("`{key}`")));
        };
        // covers and leq share a slot
        let slot = if pos >= 2 { pos - 1 } else { pos };
        if slot < rank || (slot == rank && !sections.is_empty()) {
            return Err(syntax(line, "sections in the order elements, covers|leq, ortho, mul, unit, dualizing", format!("`{key}`")));
        }
        if sections.is_empty() && key != "elements" {
            return Err(syntax(line, "`elements`", format!("`{key}`")));
        }
        rank = slot;
        match p.next() {
            Some((Tok::Colon, _)) => {}
            other => return Err(p.error("`:`", other.as_ref())),
        }
        let v = p.value()?;
        sections.push((key, v, line));
    }
    if sections.is_empty() {
        return Err(syntax(last_line, "`elements`", "end of file"));
    }
    let mut file = StructureFile {
        elements: Vec::new(),
        order: OrderSpec::Discrete,
        ortho: None,
        mul: None,
        unit: None,
        dualizing: None,
        lines: BTreeMap::new(),
    };
    let mut n = 0;
    for (key, v, line) in sections {
        file.lines.insert(key.clone(), line);
        match key.as_str() {
            "elements" => {
                let (items, line) = list(v, "elements")?;
                if items.is_empty() {
                    return Err(syntax(line, "at least one element", "`[]`"));
                }
                for it in items {
                    match it {
                        Value::Atom(a, _) => file.elements.push(a),
                        Value::List(_, l) => return Err(syntax(l, "element name", "a list")),
                    }
                }
                n = file.elements.len();
            }
            "covers" => file.order = OrderSpec::Covers(pairs(v, "covers", n)?),
            "leq" => file.order = OrderSpec::Leq(pairs(v, "leq", n)?),
            "ortho" => file.ortho = Some(index_list(v, "ortho", n, Some(n))?),
            "mul" => {
                let (rows, line) = list(v, "mul")?;
                if rows.len() != n {
                    return Err(syntax(line, format!("mul with {n} rows"), format!("{} rows", rows.len())));
                }
                file.mul = Some(rows.into_iter().map(|r| index_list(r, "mul", n, Some(n))).collect::<Result<_, _>>()?);
            }
            "unit" => file.unit = Some(index(&v, "unit", n)?),
            "dualizing" => file.dualizing = Some(index(&v, "dualizing", n)?),
            _ => unreachable!("keys checked above"),
        }
    }
    Ok(file)
}

impl StructureFile {
    /// A file for the given order (written as covers) and optional extras.
    pub fn from_poset(p: &FinitePoset) -> Self {
        StructureFile {
            elements: p.labels().to_vec(),
            order: OrderSpec::Covers(hasse_covers(p)),
            ortho: None,
            mul: None,
            unit: None,
            dualizing: None,
            lines: BTreeMap::new(),
        }
    }

    pub fn with_ortho(mut self, f: &UnaryOrderMap) -> Self {
        self.ortho = Some(f.as_slice().to_vec());
        self
    }

    pub fn with_mul(mut self, m: &MulTable) -> Self {
        self.mul = Some(m.rows());
        self
    }

    pub fn with_unit(mut self, e: Option<usize>) -> Self {
        self.unit = e;
        self
    }

    pub fn with_dualizing(mut self, d: Option<usize>) -> Self {
        self.dualizing = d;
        self
    }

    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    pub fn poset(&self) -> Result<FinitePoset, StructureError> {
        let n = self.len();
        let p = match &self.order {
            OrderSpec::Discrete => FinitePoset::antichain(n),
            OrderSpec::Covers(c) => FinitePoset::from_pairs(n, c)?,
            OrderSpec::Leq(pairs) => {
                let mut leq = vec![false; n * n];
                for i in 0..n {
                    leq[i * n + i] = true;
                }
                for &(i, j) in pairs {
                    leq[i * n + j] = true;
                }
                FinitePoset::from_flat(n, leq)?
            }
        };
        Ok(p.with_labels(self.elements.clone()))
    }

    pub fn lattice(&self) -> Result<FiniteLattice, StructureError> {
        Ok(compute_lattice(self.poset()?)?)
    }

    pub fn ortho_map(&self) -> Result<UnaryOrderMap, StructureError> {
        let o = self.ortho.clone().ok_or(StructureError::Missing("ortho"))?;
        UnaryOrderMap::new(o).map_err(StructureError::OrthoMap)
    }

    pub fn ortholattice(&self) -> Result<OrthoLattice, StructureError> {
        Ok(OrthoLattice::new(self.lattice()?, self.ortho_map()?)?)
    }

    pub fn mul_table(&self) -> Result<MulTable, StructureError> {
        let rows = self.mul.as_ref().ok_or(StructureError::Missing("mul"))?;
        Ok(MulTable::from_rows(rows).expect("shape checked by the parser"))
    }

    pub fn residuated(&self) -> Result<ResiduatedStructure, StructureError> {
        Ok(ResiduatedStructure::new(self.poset()?, self.mul_table()?)?)
    }

    /// Text that parses back to an equal file.
    pub fn serialize(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(out, "elements: [{}]", self.elements.join(", "));
        let pairs = |ps: &[(usize, usize)]| {
            ps.iter().map(|(i, j)| format!("[{i}, {j}]")).collect::<Vec<_>>().join(", ")
        };
        match &self.order {
            OrderSpec::Discrete => {}
            OrderSpec::Covers(c) => {
                let _ = writeln!(out, "covers: [{}]", pairs(c));
            }
            OrderSpec::Leq(c) => {
                let _ = writeln!(out, "leq: [{}]", pairs(c));
            }
        }
        let join = |v: &[usize]| v.iter().map(usize::to_string).collect::<Vec<_>>().join(", ");
        if let Some(o) = &self.ortho {
            let _ = writeln!(out, "ortho: [{}]", join(o));
        }
        if let Some(m) = &self.mul {
            let rows: Vec<String> = m.iter().map(|r| format!("[{}]", join(r))).collect();
            let _ = writeln!(out, "mul: [{}]", rows.join(",\n      "));
        }
        if let Some(e) = self.unit {
            let _ = writeln!(out, "unit: {e}");
        }
        if let Some(d) = self.dualizing {
            let _ = writeln!(out, "dualizing: {d}");
        }
        out
    }
}

/// Outcome of checking a structure file.
#[derive(Clone, Debug, Default)]
pub struct Verification {
    /// Laws the declared sections commit to, plus agreement checks between
    /// independent deciders. These set the exit code.
    pub laws: Vec<LawReport>,
    /// Classification facts (distributive, Boolean, orthomodular, ...). A
    /// FAIL here only means the structure lacks the property.
    pub properties: Vec<LawReport>,
}

/// Checks everything that applies to what the file declares. Order and
/// lattice failures stop early since later checks need a lattice.
pub fn verify_file(f: &StructureFile) -> Verification {
    let mut v = Verification::default();
    let p = match f.poset() {
        Ok(p) => p,
        Err(StructureError::Poset(PosetError::Violation { axiom, witness })) => {
            v.laws.push(LawReport::fail_at("order.poset", witness).with_note(axiom.to_string()));
            return v;
        }
        Err(e) => {
            v.laws.push(LawReport::skipped("order.poset", e.to_string()));
            return v;
        }
    };
    v.laws.push(LawReport::pass("order.poset"));
    let l = match compute_lattice(p.clone()) {
        Ok(l) => l,
        Err(e) => {
            let n = p.len();
            let w = match e {
                // the minimal elements, or the maximal ones if there is a bottom
                LatticeError::NotBounded => {
                    let minimal: Vec<usize> = (0..n).filter(|&x| (0..n).all(|y| !p.lt(y, x))).collect();
                    if minimal.len() > 1 {
                        minimal
                    } else {
                        (0..n).filter(|&x| (0..n).all(|y| !p.lt(x, y))).collect()
                    }
                }
                LatticeError::NoMeet(a, b) | LatticeError::NoJoin(a, b) => vec![a, b],
            };
            v.laws.push(LawReport::fail_at("order.lattice", w).with_note(e.to_string()));
            return v;
        }
    };
    v.laws.push(LawReport::pass("order.lattice"));
    v.properties.push(is_distributive(&l));
    v.properties.push(is_complemented(&l).0);
    v.properties.push(is_boolean(&l));

    let mut oml = None;
    if let Some(map) = &f.ortho {
        let map = UnaryOrderMap::new(map.clone()).expect("parser checked ranges");
        v.laws.push(check_inversion(&p, &map));
        let ol = check_ortholattice(&l, &map);
        let is_ol = ol.passed();
        v.laws.push(ol);
        if is_ol {
            let o = OrthoLattice::new(l.clone(), map).expect("ortholattice checked");
            let forms = check_orthomodular(&o);
            v.laws.push(check_orthomodular_forms_agree(&forms));
            v.properties.extend(forms);
            if is_orthomodular(&o) {
                v.laws.push(check_compatibility_symmetric(&o));
                oml = Some(o);
            }
        }
    }

    if f.mul.is_some() {
        let m = f.mul_table().expect("mul present");
        v.laws.push(check_associative(&m));
        let res = check_residuated(&p, &m);
        let residuated = res.passed();
        v.laws.push(res);
        if residuated {
            v.laws.push(check_integral_consequences(&l, &m));
            let s = ResiduatedStructure::from_lattice(&l, m).expect("residuation checked");
            if let Some(e) = f.unit {
                let r = match (0..s.len()).find(|&x| s.mul(e, x) != x || s.mul(x, e) != x) {
                    None => LawReport::pass("residuation.unit"),
                    Some(x) => LawReport::fail_at("residuation.unit", vec![e, x]),
                };
                v.laws.push(r);
            }
            if let Some(d) = f.dualizing {
                v.laws.push(is_cyclic(&s, d));
                v.laws.push(is_dualizing(&s, d));
            }
            v.laws.extend(girard_reports(&s, None));
            if let Some(o) = &oml {
                v.laws.push(check_downset_unit(&s, o));
            }
        }
    }
    v
}

/// The three orthomodularity conditions give the same verdict.
pub fn check_orthomodular_forms_agree(forms: &[LawReport]) -> LawReport {
    const LAW: &str = "ortho.orthomodular-forms-agree";
    let verdicts: Vec<usize> = forms.iter().map(|r| r.passed() as usize).collect();
    if verdicts.windows(2).all(|w| w[0] == w[1]) {
        LawReport::pass(LAW)
    } else {
        LawReport::fail_at(LAW, verdicts).with_note("verdicts per form (1 = holds)")
    }
}

/// Property lines: `yes`/`no` per property, with the witness of a `no`.
pub fn render_properties(props: &[LawReport]) -> String {
    let mut out = String::new();
    for r in props {
        let answer = if r.passed() {
            "yes"
        } else if r.failed() {
            "no"
        } else {
            "n/a"
        };
        let _ = write!(out, "  {answer:<4} {}", r.law);
        if !r.witness.is_empty() {
            let _ = write!(out, "  witness {}", r.witness);
        }
        out.push('\n');
    }
    out
}

/// Graphviz digraph with one edge per cover, drawn bottom to top.
pub fn export_dot(p: &FinitePoset) -> String {
    let mut out = String::from("digraph poset {\n  rankdir=BT;\n  node [shape=circle];\n");
    for i in 0..p.len() {
        let label = p.label(i).replace('\\', "\\\\").replace('"', "\\\"");
        let _ = writeln!(out, "  n{i} [label=\"{label}\"];");
    }
    for (a, b) in hasse_covers(p) {
        let _ = writeln!(out, "  n{a} -> n{b};");
    }
    out.push_str("}\n");
    out
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Format {
    Human,
    Machine,
}

/// Human output groups laws by the prefix before the first `.`; machine
/// output is one `LAW<TAB>VERDICT<TAB>WITNESS` line per report.
pub fn render_report(reports: &[LawReport], format: Format) -> String {
    let mut out = String::new();
    match format {
        Format::Machine => {
            for r in reports {
                let _ = writeln!(out, "{}\t{}\t{}", r.law, r.verdict, r.witness);
            }
        }
        Format::Human => {
            if reports.is_empty() {
                out.push_str("no laws evaluated\n");
                return out;
            }
            let mut groups: Vec<(&str, Vec<&LawReport>)> = Vec::new();
            for r in reports {
                let module = r.law.split('.').next().unwrap_or("");
                match groups.iter_mut().find(|g| g.0 == module) {
                    Some(g) => g.1.push(r),
                    None => groups.push((module, vec![r])),
                }
            }
            for (module, rs) in groups {
                let _ = writeln!(out, "[{module}]");
                for r in rs {
                    let _ = write!(out, "  {:<7} {}", r.verdict.to_string(), r.law);
                    if !r.witness.is_empty() {
                        let _ = write!(out, "  witness {}", r.witness);
                    }
                    if !r.note.is_empty() {
                        let _ = write!(out, "  ({})", r.note);
                    }
                    out.push('\n');
                }
            }
            let failed = reports.iter().filter(|r| r.failed()).count();
            let _ = writeln!(out, "{} laws, {} failed", reports.len(), failed);
        }
    }
    out
}

/// Vectors written as `1,0;0,1` (semicolons between vectors).
pub fn parse_vectors(text: &str) -> Result<Vec<Vec<f64>>, ParseError> {
    let text = text.trim();
    if text.is_empty() {
        return Ok(Vec::new());
    }
    text.split(';')
        .map(|v| {
            v.split(',')
                .map(|x| {
                    x.trim()
                        .parse::<f64>()
                        .map_err(|_| syntax(1, "a number", format!("`{}`", x.trim())))
                })
                .collect()
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ortho::is_orthomodular;
    use crate::zoo;

    #[test]
    fn minimal_file() {
        let f = parse("elements: [x]").unwrap();
        assert_eq!(f.len(), 1);
        assert_eq!(f.order, OrderSpec::Discrete);
        assert_eq!(f.lattice().unwrap().len(), 1);
    }

    #[test]
    fn comments_and_multiline_lists() {
        let text = "# square\nelements: [0, a, b, 1]  # names\ncovers: [[0, 1],\n  [0, 2], [1, 3],\n  [2, 3],]\nunit: 3\n";
        let f = parse(text).unwrap();
        assert_eq!(f.order, OrderSpec::Covers(vec![(0, 1), (0, 2), (1, 3), (2, 3)]));
        assert_eq!(f.unit, Some(3));
        assert_eq!(f.lines["covers"], 3);
        assert_eq!(f.lines["unit"], 6);
    }

    #[test]
    fn short_mul_row_reports_its_line() {
        let text = "elements: [0, 1]\ncovers: [[0, 1]]\nmul: [[0, 0],\n      [0]]\n";
        let err = parse(text).unwrap_err();
        assert_eq!(err.line(), 4);
        assert!(err.to_string().contains("2 entries"), "{err}");
    }

    #[test]
    fn unknown_key_is_rejected() {
        let err = parse("elements: [0]\ncolour: red\n").unwrap_err();
        assert_eq!(err.line(), 2);
    }

    #[test]
    fn section_order_is_enforced() {
        assert!(parse("elements: [0, 1]\nunit: 1\ncovers: [[0, 1]]\n").is_err());
        assert!(parse("elements: [0, 1]\ncovers: [[0, 1]]\nleq: [[0, 1]]\n").is_err());
        assert!(parse("covers: [[0, 1]]\n").is_err());
        assert!(parse("elements: [0]\nelements: [0]\n").is_err());
        assert!(parse("# nothing\n").is_err());
    }

    #[test]
    fn out_of_range_index() {
        let err = parse("elements: [0, 1]\ncovers: [[0, 2]]\n").unwrap_err();
        assert!(matches!(err, ParseError::Range { line: 2, value: 2, n: 2, .. }));
    }

    #[test]
    fn leq_without_transitivity_is_a_poset_error() {
        let f = parse("elements: [a, b, c]\nleq: [[0, 1], [1, 2]]\n").unwrap();
        assert!(matches!(f.poset(), Err(StructureError::Poset(_))));
    }

    #[test]
    fn serialize_round_trip() {
        let o = zoo::mo(2);
        let f = StructureFile::from_poset(o.lattice().poset()).with_ortho(o.ortho_map());
        let g = parse(&f.serialize()).unwrap();
        assert_eq!(f, g);
        assert!(is_orthomodular(&g.ortholattice().unwrap()));
        let s = zoo::sugihara3();
        let f = StructureFile::from_poset(s.poset())
            .with_mul(s.mul_table())
            .with_unit(Some(1))
            .with_dualizing(Some(1));
        assert_eq!(parse(&f.serialize()).unwrap(), f);
        let leq = parse("elements: [a, b]\nleq: [[0, 1]]\n").unwrap();
        assert_eq!(parse(&leq.serialize()).unwrap(), leq);
    }

    #[test]
    fn dot_edges_are_covers() {
        let count = |dot: &str| (dot.matches("[label=").count(), dot.matches(" -> ").count());
        assert_eq!(count(&export_dot(&FinitePoset::chain(2))), (2, 1));
        assert_eq!(count(&export_dot(zoo::boolean(2).poset())), (4, 4));
        assert_eq!(count(&export_dot(zoo::m3().poset())), (5, 6));
        assert!(export_dot(&FinitePoset::chain(2)).contains("rankdir=BT"));
    }

    #[test]
    fn report_rendering() {
        assert_eq!(render_report(&[], Format::Human), "no laws evaluated\n");
        assert_eq!(render_report(&[], Format::Machine), "");
        let rs = vec![
            LawReport::pass("order.distributive"),
            LawReport::fail_at("residuation.associative", vec![1, 2, 0]),
        ];
        let m = render_report(&rs, Format::Machine);
        assert_eq!(m, "order.distributive\tPASS\t-\nresiduation.associative\tFAIL\t(1,2,0)\n");
        let h = render_report(&rs, Format::Human);
        assert!(h.contains("[order]") && h.contains("[residuation]") && h.contains("(1,2,0)"));
    }

    #[test]
    fn verify_bundles() {
        let ok = parse("elements: [0, a, b, 1]\ncovers: [[0, 1], [0, 2], [1, 3], [2, 3]]\northo: [3, 2, 1, 0]\nmul: [[0,0,0,0],[0,1,0,1],[0,0,2,2],[0,1,2,3]]\nunit: 3\ndualizing: 0\n").unwrap();
        let v = verify_file(&ok);
        assert!(v.laws.iter().chain(&v.properties).all(|r| !r.failed()), "{v:?}");
        assert!(v.laws.iter().any(|r| r.law == "girard.downset-unit" && r.passed()));
        let bad = parse("elements: [a, b, c]\nleq: [[0, 1], [1, 2]]\n").unwrap();
        let v = verify_file(&bad);
        assert!(v.laws[0].failed() && v.laws.len() == 1);
        let fence = parse("elements: [a, b, c, d]\ncovers: [[0, 2], [0, 3], [1, 2], [1, 3]]\n").unwrap();
        assert!(verify_file(&fence).laws.last().unwrap().failed());
        let o6 = StructureFile::from_poset(zoo::o6().lattice().poset()).with_ortho(zoo::o6().ortho_map());
        let v = verify_file(&o6);
        assert!(v.laws.iter().all(|r| !r.failed()));
        assert_eq!(v.properties.iter().filter(|r| r.failed()).count(), 5);
    }

    #[test]
    fn vector_lists() {
        assert_eq!(parse_vectors("1,0;0,1").unwrap(), vec![vec![1.0, 0.0], vec![0.0, 1.0]]);
        assert_eq!(parse_vectors(" 1e-12 , 2 ").unwrap(), vec![vec![1e-12, 2.0]]);
        assert!(parse_vectors("").unwrap().is_empty());
        assert!(parse_vectors("1,x").is_err());
    }
}

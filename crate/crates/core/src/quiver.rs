//! Quivers, doubling and the JSON input document.
//!
//! A quiver is a list of named vertices and graded arrows. Every arrow knows
//! its [`ArrowKind`] so derived constructions (doubling, cotangent letters,
//! formal loops of an extension) can be told apart after they are merged into
//! one bigger quiver.

use std::collections::{BTreeMap, HashMap};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::ncalg::Letter;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum ArrowKind {
    /// An arrow of the quiver as given.
    Original,
    /// The reversed arrow `a*` added by doubling.
    Dual,
    /// A shifted double derivation letter `D(x)` of the cotangent algebra.
    Cotangent,
    /// The loop `t(i)` of a Poisson extension.
    Formal,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Arrow {
    pub name: String,
    pub source: u32,
    pub target: u32,
    pub degree: i64,
    pub kind: ArrowKind,
    /// Dual partner for doubled arrows, base letter for cotangent letters,
    /// vertex for formal loops.
    pub partner: Option<u32>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Quiver {
    vertices: Vec<String>,
    arrows: Vec<Arrow>,
    by_name: HashMap<String, u32>,
    vertex_by_name: HashMap<String, u32>,
}

fn valid_vertex_name(name: &str) -> bool {
    !name.is_empty() && name.chars().all(|c| c.is_ascii_alphanumeric() || c == '_')
}

fn valid_arrow_name(name: &str) -> bool {
    let mut chars = name.chars();
    matches!(chars.next(), Some(c) if c.is_ascii_alphabetic() || c == '_')
        && chars.all(|c| c.is_ascii_alphanumeric() || c == '_')
        && !matches!(name, "e" | "t" | "D")
}

impl Quiver {
    pub fn new<S: Into<String>>(vertices: impl IntoIterator<Item = S>) -> Result<Quiver> {
        let vertices: Vec<String> = vertices.into_iter().map(Into::into).collect();
        let mut vertex_by_name = HashMap::new();
        for (i, v) in vertices.iter().enumerate() {
            if !valid_vertex_name(v) {
                return Err(Error::InvalidQuiver(format!("bad vertex name `{v}`")));
            }
            if vertex_by_name.insert(v.clone(), i as u32).is_some() {
                return Err(Error::InvalidQuiver(format!("duplicate vertex `{v}`")));
            }
        }
        if vertices.is_empty() {
            return Err(Error::InvalidQuiver("no vertices".into()));
        }
        Ok(Quiver { vertices, arrows: Vec::new(), by_name: HashMap::new(), vertex_by_name })
    }

    /// Add an arrow of the given quiver. Names follow `[A-Za-z_][A-Za-z0-9_]*`.
    pub fn add_arrow(&mut self, name: &str, source: &str, target: &str, degree: i64) -> Result<u32> {
        if !valid_arrow_name(name) {
            return Err(Error::InvalidQuiver(format!("bad arrow name `{name}`")));
        }
        let s = self.vertex_index(source)?;
        let t = self.vertex_index(target)?;
        self.push_arrow(Arrow { name: name.to_string(), source: s, target: t, degree, kind: ArrowKind::Original, partner: None })
    }

    /// Add an arrow with a derived name, bypassing the user-name rules.
    pub fn push_arrow(&mut self, arrow: Arrow) -> Result<u32> {
        if self.by_name.contains_key(&arrow.name) {
            return Err(Error::InvalidQuiver(format!("duplicate arrow `{}`", arrow.name)));
        }
        if arrow.source as usize >= self.vertices.len() || arrow.target as usize >= self.vertices.len() {
            return Err(Error::InvalidQuiver(format!("arrow `{}` has an unknown endpoint", arrow.name)));
        }
        let id = self.arrows.len() as u32;
        self.by_name.insert(arrow.name.clone(), id);
        self.arrows.push(arrow);
        Ok(id)
    }

    pub fn num_vertices(&self) -> usize {
        self.vertices.len()
    }

    pub fn vertices(&self) -> &[String] {
        &self.vertices
    }

    pub fn vertex_name(&self, v: u32) -> &str {
        &self.vertices[v as usize]
    }

    pub fn vertex_index(&self, name: &str) -> Result<u32> {
        self.vertex_by_name.get(name).copied().ok_or_else(|| Error::UnknownName(format!("vertex {name}")))
    }

    pub fn arrows(&self) -> &[Arrow] {
        &self.arrows
    }

    pub fn arrow(&self, id: u32) -> &Arrow {
        &self.arrows[id as usize]
    }

    pub fn arrow_id(&self, name: &str) -> Result<u32> {
        self.by_name.get(name).copied().ok_or_else(|| Error::UnknownName(name.to_string()))
    }

    pub fn letter(&self, id: u32) -> Letter {
        let a = &self.arrows[id as usize];
        Letter { id, source: a.source, target: a.target, degree: a.degree }
    }

    pub fn letter_by_name(&self, name: &str) -> Result<Letter> {
        Ok(self.letter(self.arrow_id(name)?))
    }

    pub fn letters(&self) -> Vec<Letter> {
        (0..self.arrows.len() as u32).map(|i| self.letter(i)).collect()
    }

    /// Ids of the arrows of a given kind, in declaration order.
    pub fn arrows_of_kind(&self, kind: ArrowKind) -> Vec<u32> {
        (0..self.arrows.len() as u32).filter(|&i| self.arrows[i as usize].kind == kind).collect()
    }

    /// The dual partner of a doubled arrow.
    pub fn dual(&self, id: u32) -> Option<u32> {
        let a = &self.arrows[id as usize];
        match a.kind {
            ArrowKind::Original | ArrowKind::Dual => a.partner,
            _ => None,
        }
    }

    /// The doubled quiver: each original arrow `a` gains a reversed arrow `a*`
    /// of degree `n - |a|`, where `n` is the intended bracket degree.
    pub fn double(&self, bracket_degree: i64) -> Result<Quiver> {
        let mut out = Quiver::new(self.vertices.clone())?;
        let originals = self.arrows_of_kind(ArrowKind::Original);
        if originals.len() != self.arrows.len() {
            return Err(Error::InvalidQuiver("only a plain quiver can be doubled".into()));
        }
        for &id in &originals {
            let a = &self.arrows[id as usize];
            out.push_arrow(a.clone())?;
        }
        for &id in &originals {
            let a = self.arrows[id as usize].clone();
            let star = out.push_arrow(Arrow {
                name: format!("{}*", a.name),
                source: a.target,
                target: a.source,
                degree: bracket_degree - a.degree,
                kind: ArrowKind::Dual,
                partner: Some(id),
            })?;
            out.arrows[id as usize].partner = Some(star);
        }
        Ok(out)
    }

    /// Whether every original arrow has a dual partner.
    pub fn is_doubled(&self) -> bool {
        self.arrows
            .iter()
            .all(|a| !matches!(a.kind, ArrowKind::Original | ArrowKind::Dual) || a.partner.is_some())
            && self.arrows.iter().any(|a| a.kind == ArrowKind::Dual)
    }

    /// One vertex with one loop `a`.
    pub fn jordan() -> Quiver {
        let mut q = Quiver::new(["0"]).expect("static quiver");
        q.add_arrow("a", "0", "0", 0).expect("static quiver");
        q
    }

    /// The cyclic A3 quiver `0 -> 1 -> 2 -> 0` with a framing arrow `inf -> 0`.
    pub fn a3_framed() -> Quiver {
        let mut q = Quiver::new(["inf", "0", "1", "2"]).expect("static quiver");
        q.add_arrow("p", "inf", "0", 0).expect("static quiver");
        q.add_arrow("a0", "0", "1", 0).expect("static quiver");
        q.add_arrow("a1", "1", "2", 0).expect("static quiver");
        q.add_arrow("a2", "2", "0", 0).expect("static quiver");
        q
    }

    /// The A2 quiver `1 -> 2`.
    pub fn a2() -> Quiver {
        let mut q = Quiver::new(["1", "2"]).expect("static quiver");
        q.add_arrow("a", "1", "2", 0).expect("static quiver");
        q
    }

    /// One vertex with the given loops of degree zero.
    pub fn loops(names: &[&str]) -> Quiver {
        let mut q = Quiver::new(["0"]).expect("static quiver");
        for n in names {
            q.add_arrow(n, "0", "0", 0).expect("loop names are valid");
        }
        q
    }
}

/// A vertex or arrow name written either as a JSON string or a number.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum Name {
    Text(String),
    Number(i64),
}

impl Name {
    pub fn as_string(&self) -> String {
        match self {
            Name::Text(s) => s.clone(),
            Name::Number(n) => n.to_string(),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ArrowDoc {
    pub name: String,
    pub source: Name,
    pub target: Name,
    #[serde(default)]
    pub degree: i64,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct BracketEntry {
    pub left: String,
    pub right: String,
    pub value: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum BracketDoc {
    Table(Vec<BracketEntry>),
    Graded { degree: i64, table: Vec<BracketEntry> },
}

impl BracketDoc {
    pub fn degree(&self) -> i64 {
        match self {
            BracketDoc::Table(_) => 0,
            BracketDoc::Graded { degree, .. } => *degree,
        }
    }

    pub fn entries(&self) -> &[BracketEntry] {
        match self {
            BracketDoc::Table(t) => t,
            BracketDoc::Graded { table, .. } => table,
        }
    }
}

/// The quiver-spec input document.
///
/// The quiver described is the undoubled quiver; `bracket`, `moment` and
/// `derivation` refer to letters of its double, written in the expression
/// grammar of [`crate::expr`].
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct QuiverDoc {
    pub vertices: Vec<Name>,
    pub arrows: Vec<ArrowDoc>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub bracket: Option<BracketDoc>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub moment: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub derivation: Option<BTreeMap<String, String>>,
}

impl QuiverDoc {
    pub fn from_json(text: &str) -> Result<QuiverDoc> {
        serde_json::from_str(text).map_err(|e| Error::Parse(e.to_string()))
    }

    pub fn quiver(&self) -> Result<Quiver> {
        let mut q = Quiver::new(self.vertices.iter().map(Name::as_string))?;
        for a in &self.arrows {
            q.add_arrow(&a.name, &a.source.as_string(), &a.target.as_string(), a.degree)?;
        }
        Ok(q)
    }

    /// Bracket degree declared by the document (zero by default).
    pub fn bracket_degree(&self) -> i64 {
        self.bracket.as_ref().map_or(0, BracketDoc::degree)
    }
}

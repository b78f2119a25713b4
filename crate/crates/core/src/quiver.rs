//! Bound quivers: the textual presentation of an algebra by vertices, arrows
//! and k-linear relations among parallel paths. Composition is diagrammatic
//! throughout: in the path `a*b`, `a` is traversed first.

use crate::scalar::{is_negative, Field, K};
use std::collections::HashMap;
use std::fmt::Write as _;
use thiserror::Error;

#[derive(Debug, Error, PartialEq)]
pub enum QuiverError {
    #[error("parse error at line {line}, column {col}: {msg}")]
    Parse { line: usize, col: usize, msg: String },
    #[error("duplicate label `{0}`")]
    DuplicateLabel(String),
    #[error("unknown vertex `{0}`")]
    UnknownVertex(String),
    #[error("unknown arrow `{0}`")]
    UnknownArrow(String),
    #[error("relation terms are not parallel: `{0}` vs `{1}`")]
    NonParallelRelation(String, String),
    #[error("relation path `{0}` has length {1}; relations need length >= 2")]
    RelationTooShort(String, usize),
    #[error("arrows `{0}` and `{1}` do not compose")]
    NonComposable(String, String),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Arrow {
    pub name: String,
    pub src: usize,
    pub tgt: usize,
}

/// One k-linear combination of parallel paths; paths are arrow-index
/// sequences in diagrammatic order.
#[derive(Clone, Debug, PartialEq)]
pub struct Relation {
    pub terms: Vec<(K, Vec<usize>)>,
}

#[derive(Clone, Debug, PartialEq)]
pub struct BoundQuiver {
    pub vertices: Vec<String>,
    pub arrows: Vec<Arrow>,
    pub relations: Vec<Relation>,
}

/// Order labels numerically when both are integers, lexicographically
/// otherwise, so that `2 < 10` but `a < b`.
pub fn label_cmp(a: &str, b: &str) -> std::cmp::Ordering {
    match (a.parse::<i64>(), b.parse::<i64>()) {
        (Ok(x), Ok(y)) => x.cmp(&y),
        _ => a.cmp(b),
    }
}

impl BoundQuiver {
    pub fn vertex_index(&self, label: &str) -> Option<usize> {
        self.vertices.iter().position(|v| v == label)
    }

    pub fn arrow_index(&self, label: &str) -> Option<usize> {
        self.arrows.iter().position(|a| a.name == label)
    }

    pub fn path_endpoints(&self, path: &[usize]) -> Option<(usize, usize)> {
        let first = *path.first()?;
        let mut tgt = self.arrows[first].tgt;
        for &a in &path[1..] {
            if self.arrows[a].src != tgt {
                return None;
            }
            tgt = self.arrows[a].tgt;
        }
        Some((self.arrows[first].src, tgt))
    }

    pub fn path_name(&self, path: &[usize]) -> String {
        path.iter().map(|&a| self.arrows[a].name.as_str()).collect::<Vec<_>>().join("*")
    }

    pub fn validate(&self) -> Result<(), QuiverError> {
        let mut seen = std::collections::HashSet::new();
        for v in &self.vertices {
            if !seen.insert(v.clone()) {
                return Err(QuiverError::DuplicateLabel(v.clone()));
            }
        }
        let mut aseen = std::collections::HashSet::new();
        for a in &self.arrows {
            if !aseen.insert(a.name.clone()) || seen.contains(&a.name) {
                return Err(QuiverError::DuplicateLabel(a.name.clone()));
            }
            if a.src >= self.vertices.len() || a.tgt >= self.vertices.len() {
                return Err(QuiverError::UnknownVertex(a.name.clone()));
            }
        }
        for r in &self.relations {
            let mut sig = None;
            for (_, p) in &r.terms {
                if p.len() < 2 {
                    return Err(QuiverError::RelationTooShort(self.path_name(p), p.len()));
                }
                let ends = self.path_endpoints(p).ok_or_else(|| {
                    QuiverError::NonComposable(self.path_name(p), String::new())
                })?;
                match sig {
                    None => sig = Some((ends, self.path_name(p))),
                    Some((other, ref name)) if other != ends => {
                        return Err(QuiverError::NonParallelRelation(
                            name.clone(),
                            self.path_name(p),
                        ))
                    }
                    _ => {}
                }
            }
        }
        Ok(())
    }

    /// Arrows reversed and every relation path reversed.
    pub fn opposite(&self) -> BoundQuiver {
        BoundQuiver {
            vertices: self.vertices.clone(),
            arrows: self
                .arrows
                .iter()
                .map(|a| Arrow { name: a.name.clone(), src: a.tgt, tgt: a.src })
                .collect(),
            relations: self
                .relations
                .iter()
                .map(|r| Relation {
                    terms: r
                        .terms
                        .iter()
                        .map(|(c, p)| (c.clone(), p.iter().rev().copied().collect()))
                        .collect(),
                })
                .collect(),
        }
    }

    /// Canonical text form: sorted labels, normalized relations. Parsing the
    /// output reproduces the quiver up to this normalization.
    pub fn print(&self) -> String {
        let mut vs: Vec<&String> = self.vertices.iter().collect();
        vs.sort_by(|a, b| label_cmp(a, b));
        let mut out = String::new();
        let _ = writeln!(out, "vertices: {}", vs.iter().map(|s| s.as_str()).collect::<Vec<_>>().join(" "));
        let mut arrows: Vec<&Arrow> = self.arrows.iter().collect();
        arrows.sort_by(|a, b| label_cmp(&a.name, &b.name));
        for a in arrows {
            let _ = writeln!(
                out,
                "arrow {}: {} -> {}",
                a.name, self.vertices[a.src], self.vertices[a.tgt]
            );
        }
        let mut rels: Vec<String> = self
            .relations
            .iter()
            .map(|r| self.relation_string(r))
            .collect();
        rels.sort();
        for r in rels {
            let _ = writeln!(out, "relation {}", r);
        }
        out
    }

    /// Normalized relation text: terms sorted by path, leading coefficient 1.
    pub fn relation_string(&self, r: &Relation) -> String {
        let mut terms: Vec<(K, Vec<String>)> = r
            .terms
            .iter()
            .filter(|(c, _)| !c.is_zero())
            .map(|(c, p)| (c.clone(), p.iter().map(|&a| self.arrows[a].name.clone()).collect()))
            .collect();
        terms.sort_by(|a, b| (a.1.len(), &a.1).cmp(&(b.1.len(), &b.1)));
        if terms.is_empty() {
            return "0".into();
        }
        let lead = terms[0].0.clone();
        let inv = lead.inv();
        let mut out = String::new();
        for (i, (c, p)) in terms.iter().enumerate() {
            let c = c.clone() * inv.clone();
            let neg = is_negative(&c);
            let mag = if neg { -c.clone() } else { c.clone() };
            if i == 0 {
                if neg {
                    out.push_str("- ");
                }
            } else {
                out.push_str(if neg { " - " } else { " + " });
            }
            if mag != K::one() {
                let _ = write!(out, "{}*", mag);
            }
            out.push_str(&p.join("*"));
        }
        out
    }

    /// Set of normalized relation strings (for structural comparisons).
    pub fn relation_set(&self) -> Vec<String> {
        let mut v: Vec<String> = self.relations.iter().map(|r| self.relation_string(r)).collect();
        v.sort();
        v
    }
}

pub fn parse_bound_quiver(text: &str) -> Result<BoundQuiver, QuiverError> {
    let mut vertices: Vec<String> = Vec::new();
    let mut vmap: HashMap<String, usize> = HashMap::new();
    let mut arrows: Vec<Arrow> = Vec::new();
    let mut amap: HashMap<String, usize> = HashMap::new();
    let mut relations: Vec<(usize, String)> = Vec::new(); // parse after arrows

    let err = |line: usize, col: usize, msg: &str| QuiverError::Parse {
        line,
        col,
        msg: msg.to_string(),
    };

    for (ln, raw) in text.lines().enumerate() {
        let line_no = ln + 1;
        let line = match raw.find('#') {
            Some(i) => &raw[..i],
            None => raw,
        };
        let line = line.trim();
        if line.is_empty() {
            continue;
        }
        if let Some(rest) = line.strip_prefix("vertices:") {
            for tok in rest.split_whitespace() {
                if vmap.contains_key(tok) {
                    return Err(QuiverError::DuplicateLabel(tok.to_string()));
                }
                vmap.insert(tok.to_string(), vertices.len());
                vertices.push(tok.to_string());
            }
        } else if let Some(rest) = line.strip_prefix("arrow ") {
            let (name, spec) = rest
                .split_once(':')
                .ok_or_else(|| err(line_no, 1, "expected `arrow <name>: <src> -> <tgt>`"))?;
            let name = name.trim().to_string();
            if name.is_empty() || name.chars().next().unwrap().is_ascii_digit() {
                return Err(err(line_no, 7, "arrow names must not start with a digit"));
            }
            let (src, tgt) = spec
                .split_once("->")
                .ok_or_else(|| err(line_no, 1, "expected `->` in arrow declaration"))?;
            let src = src.trim();
            let tgt = tgt.trim();
            let si = *vmap
                .get(src)
                .ok_or_else(|| QuiverError::UnknownVertex(src.to_string()))?;
            let ti = *vmap
                .get(tgt)
                .ok_or_else(|| QuiverError::UnknownVertex(tgt.to_string()))?;
            if amap.contains_key(&name) || vmap.contains_key(&name) {
                return Err(QuiverError::DuplicateLabel(name));
            }
            amap.insert(name.clone(), arrows.len());
            arrows.push(Arrow { name, src: si, tgt: ti });
        } else if let Some(rest) = line.strip_prefix("relation ") {
            relations.push((line_no, rest.trim().to_string()));
        } else {
            return Err(err(line_no, 1, "expected `vertices:`, `arrow` or `relation`"));
        }
    }

    let mut parsed_relations = Vec::new();
    for (line_no, body) in relations {
        let rel = parse_relation(&body, &amap, line_no)?;
        parsed_relations.push(rel);
    }

    let q = BoundQuiver { vertices, arrows, relations: parsed_relations };
    q.validate()?;
    Ok(q)
}

fn parse_relation(
    body: &str,
    amap: &HashMap<String, usize>,
    line_no: usize,
) -> Result<Relation, QuiverError> {
    // Split into signed terms at top-level + and - (a leading - is a sign).
    let mut terms: Vec<(K, Vec<usize>)> = Vec::new();
    let mut current = String::new();
    let mut sign = K::one();
    let mut pending_sign = K::one();
    let flush = |current: &mut String,
                 sign: &K,
                 terms: &mut Vec<(K, Vec<usize>)>|
     -> Result<(), QuiverError> {
        let t = current.trim();
        if t.is_empty() {
            return Err(QuiverError::Parse {
                line: line_no,
                col: 1,
                msg: "empty relation term".into(),
            });
        }
        let mut coeff = sign.clone();
        let mut path = Vec::new();
        for (i, chunk) in t.split('*').enumerate() {
            let chunk = chunk.trim();
            if i == 0 {
                if let Some(c) = K::parse(chunk) {
                    coeff = coeff.clone() * c;
                    continue;
                }
            }
            match amap.get(chunk) {
                Some(&ai) => path.push(ai),
                None => {
                    return Err(QuiverError::UnknownArrow(chunk.to_string()));
                }
            }
        }
        terms.push((coeff, path));
        current.clear();
        Ok(())
    };
    for ch in body.chars() {
        match ch {
            '+' => {
                if current.trim().is_empty() {
                    return Err(QuiverError::Parse {
                        line: line_no,
                        col: 1,
                        msg: "unexpected `+`".into(),
                    });
                }
                flush(&mut current, &sign, &mut terms)?;
                sign = pending_sign.clone();
            }
            '-' => {
                if current.trim().is_empty() {
                    // unary minus
                    sign = -sign;
                } else {
                    flush(&mut current, &sign, &mut terms)?;
                    sign = -pending_sign.clone();
                }
            }
            _ => current.push(ch),
        }
        pending_sign = K::one();
    }
    flush(&mut current, &sign, &mut terms)?;
    Ok(Relation { terms })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures::A5_CYCLIC;
    use crate::scalar::k;

    #[test]
    fn parses_a5_cyclic_quiver() {
        let q = parse_bound_quiver(A5_CYCLIC).unwrap();
        assert_eq!(q.vertices.len(), 5);
        assert_eq!(q.arrows.len(), 6);
        assert_eq!(q.relations.len(), 6);
    }

    #[test]
    fn parses_trivial_quiver() {
        let q = parse_bound_quiver("vertices: 1").unwrap();
        assert_eq!(q.vertices.len(), 1);
        assert!(q.arrows.is_empty());
        assert!(q.relations.is_empty());
    }

    #[test]
    fn parses_commutativity_relation() {
        // The two-term relation of the D4 example: a*b - g*d with both paths 4 ~> 1.
        let text = "
vertices: 1 2 3 4
arrow a: 4 -> 2
arrow b: 2 -> 1
arrow g: 4 -> 3
arrow d: 3 -> 1
relation a*b - g*d
";
        let q = parse_bound_quiver(text).unwrap();
        assert_eq!(q.relations.len(), 1);
        assert_eq!(q.relations[0].terms.len(), 2);
        assert_eq!(q.relations[0].terms[0].0, k(1));
        assert_eq!(q.relations[0].terms[1].0, k(-1));
    }

    #[test]
    fn rejects_non_parallel_relation() {
        let text = "
vertices: 1 2 3
arrow a: 1 -> 2
arrow b: 2 -> 3
arrow c: 2 -> 1
relation a*b - a*c
";
        let e = parse_bound_quiver(text).unwrap_err();
        assert!(matches!(e, QuiverError::NonParallelRelation(_, _)));
    }

    #[test]
    fn rejects_dangling_and_duplicates() {
        assert!(matches!(
            parse_bound_quiver("vertices: 1\narrow a: 1 -> 2"),
            Err(QuiverError::UnknownVertex(_))
        ));
        assert!(matches!(
            parse_bound_quiver("vertices: 1 1"),
            Err(QuiverError::DuplicateLabel(_))
        ));
    }

    #[test]
    fn coefficient_parsing() {
        let text = "
vertices: 1 2 3
arrow a: 1 -> 2
arrow b: 2 -> 3
arrow c: 1 -> 3

# not admissible, but fine for the parser: c has length 1 in no relation
relation 1/2*a*b - a*b
";
        let q = parse_bound_quiver(text).unwrap();
        assert_eq!(q.relations[0].terms[0].0, K::from_ratio(1, 2));
    }

    #[test]
    fn print_parse_roundtrip() {
        let q = parse_bound_quiver(A5_CYCLIC).unwrap();
        let printed = q.print();
        let q2 = parse_bound_quiver(&printed).unwrap();
        assert_eq!(q2.print(), printed);
        assert_eq!(q2.relation_set(), q.relation_set());
    }

    #[test]
    fn opposite_is_involution() {
        // D5 quiver of the completion example.
        let text = "
vertices: 1 2 3 4 5
arrow g: 2 -> 1
arrow b: 3 -> 2
arrow d: 3 -> 4
arrow a: 5 -> 3
relation a*b*g
relation a*d
";
        let q = parse_bound_quiver(text).unwrap();
        let qop = q.opposite();
        assert_eq!(qop.arrows[0].src, q.arrows[0].tgt);
        assert_eq!(qop.opposite(), q);
    }
}

//! Finite quivers and arrow words.
//!
//! Words are stored in functional order: `[a1, a2, ..., an]` is the composite
//! `a1 a2 ... an`, where `an` is applied first. A word is composable when
//! `source(a_i) == target(a_{i+1})`.

use std::collections::HashMap;

use crate::error::{Error, Result};

/// A word of arrow indices in functional (right-to-left) order.
pub type Word = Vec<usize>;

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Arrow {
    pub id: String,
    pub source: usize,
    pub target: usize,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Quiver {
    labels: Vec<String>,
    arrows: Vec<Arrow>,
}

impl Quiver {
    pub fn new(labels: Vec<String>, arrows: Vec<Arrow>) -> Result<Self> {
        let mut seen = HashMap::new();
        for (i, l) in labels.iter().enumerate() {
            if seen.insert(l.clone(), i).is_some() {
                return Err(Error::InvalidQuiver(format!("duplicate vertex label {l:?}")));
            }
        }
        let mut ids = HashMap::new();
        for a in &arrows {
            if a.source >= labels.len() || a.target >= labels.len() {
                return Err(Error::InvalidQuiver(format!("arrow {:?} has an endpoint out of range", a.id)));
            }
            if ids.insert(a.id.clone(), ()).is_some() {
                return Err(Error::InvalidQuiver(format!("duplicate arrow id {:?}", a.id)));
            }
        }
        Ok(Self { labels, arrows })
    }

    /// Quiver on vertices labelled `1..=n` with arrows given as `(id, source, target)`
    /// using zero-based vertex indices.
    pub fn from_edges(n: usize, edges: &[(&str, usize, usize)]) -> Result<Self> {
        let labels = (1..=n).map(|i| i.to_string()).collect();
        let arrows = edges
            .iter()
            .map(|&(id, s, t)| Arrow { id: id.to_string(), source: s, target: t })
            .collect();
        Self::new(labels, arrows)
    }

    pub fn vertex_count(&self) -> usize {
        self.labels.len()
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn label(&self, v: usize) -> &str {
        &self.labels[v]
    }

    pub fn vertex_index(&self, label: &str) -> Result<usize> {
        self.labels
            .iter()
            .position(|l| l == label)
            .ok_or_else(|| Error::UnknownVertex(label.to_string()))
    }

    pub fn arrows(&self) -> &[Arrow] {
        &self.arrows
    }

    pub fn arrow(&self, a: usize) -> &Arrow {
        &self.arrows[a]
    }

    pub fn arrow_index(&self, id: &str) -> Result<usize> {
        self.arrows
            .iter()
            .position(|a| a.id == id)
            .ok_or_else(|| Error::UnknownArrow(id.to_string()))
    }

    pub fn arrows_from(&self, v: usize) -> impl Iterator<Item = usize> + '_ {
        (0..self.arrows.len()).filter(move |&a| self.arrows[a].source == v)
    }

    pub fn arrows_into(&self, v: usize) -> impl Iterator<Item = usize> + '_ {
        (0..self.arrows.len()).filter(move |&a| self.arrows[a].target == v)
    }

    /// Number of arrows `i -> j`.
    pub fn arrow_count(&self, i: usize, j: usize) -> usize {
        self.arrows.iter().filter(|a| a.source == i && a.target == j).count()
    }

    pub fn check_no_loops_or_two_cycles(&self) -> Result<()> {
        for a in &self.arrows {
            if a.source == a.target {
                return Err(Error::InvalidQuiver(format!("loop {:?} at vertex {}", a.id, self.labels[a.source])));
            }
            if self.arrow_count(a.target, a.source) > 0 {
                return Err(Error::InvalidQuiver(format!(
                    "2-cycle between vertices {} and {}",
                    self.labels[a.source], self.labels[a.target]
                )));
            }
        }
        Ok(())
    }

    /// The opposite quiver: same ids, every arrow reversed.
    pub fn opposite(&self) -> Quiver {
        let arrows = self
            .arrows
            .iter()
            .map(|a| Arrow { id: a.id.clone(), source: a.target, target: a.source })
            .collect();
        Quiver { labels: self.labels.clone(), arrows }
    }

    /// `(source, target)` of a nonempty composable word.
    pub fn word_endpoints(&self, word: &[usize]) -> Option<(usize, usize)> {
        let (first, last) = (*word.first()?, *word.last()?);
        for w in word.windows(2) {
            if self.arrows[w[0]].source != self.arrows[w[1]].target {
                return None;
            }
        }
        Some((self.arrows[last].source, self.arrows[first].target))
    }

    pub fn is_cycle(&self, word: &[usize]) -> bool {
        matches!(self.word_endpoints(word), Some((s, t)) if s == t)
    }

    pub fn format_word(&self, word: &[usize]) -> String {
        if word.is_empty() {
            return "e".to_string();
        }
        word.iter().map(|&a| self.arrows[a].id.as_str()).collect::<Vec<_>>().join("·")
    }

    /// All composable words of exactly `len` arrows, in functional order.
    pub fn words_of_length(&self, len: usize) -> Vec<Word> {
        let mut out: Vec<Word> = (0..self.arrows.len()).map(|a| vec![a]).collect();
        for _ in 1..len {
            let mut next = Vec::new();
            for w in &out {
                let src = self.arrows[*w.last().unwrap()].source;
                for a in self.arrows_into(src) {
                    let mut nw = w.clone();
                    nw.push(a);
                    next.push(nw);
                }
            }
            out = next;
        }
        if len == 0 {
            Vec::new()
        } else {
            out
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn endpoints_follow_functional_order() {
        // alpha: 2->1, beta: 3->2
        let q = Quiver::from_edges(3, &[("alpha", 1, 0), ("beta", 2, 1)]).unwrap();
        assert_eq!(q.word_endpoints(&[0, 1]), Some((2, 0)));
        assert_eq!(q.word_endpoints(&[1, 0]), None);
    }

    #[test]
    fn detects_two_cycles_and_loops() {
        let q = Quiver::from_edges(2, &[("a", 0, 1), ("b", 1, 0)]).unwrap();
        assert!(q.check_no_loops_or_two_cycles().is_err());
        let q = Quiver::from_edges(1, &[("l", 0, 0)]).unwrap();
        assert!(q.check_no_loops_or_two_cycles().is_err());
    }

    #[test]
    fn rejects_duplicate_ids() {
        assert!(Quiver::from_edges(2, &[("a", 0, 1), ("a", 0, 1)]).is_err());
    }
}

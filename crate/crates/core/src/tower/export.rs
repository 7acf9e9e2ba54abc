use std::fmt::Write;

use super::{SearchResult, StageRun};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum TreeMode {
    /// Every group that was kept.
    Full,
    /// Only the roots and groups with at least one immediate descendant.
    Paper,
}

impl std::str::FromStr for TreeMode {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, String> {
        match s {
            "full" => Ok(TreeMode::Full),
            "paper" => Ok(TreeMode::Paper),
            _ => Err(format!("unknown tree mode {s:?}")),
        }
    }
}

/// Vertices shown in the given mode, in breadth-first order from the roots.
pub fn tree_vertices(result: &SearchResult, mode: TreeMode) -> Vec<usize> {
    let mut out = Vec::new();
    let mut queue: std::collections::VecDeque<usize> = result.roots.iter().copied().collect();
    while let Some(id) = queue.pop_front() {
        let n = &result.nodes[id];
        if mode == TreeMode::Full || n.parent.is_none() || n.nucleus_rank.is_some_and(|r| r > 0) {
            out.push(id);
        }
        queue.extend(&n.children);
    }
    out
}

/// DOT graph of the search tree; vertices are numbered in breadth-first
/// order.
pub fn export_tree(result: &SearchResult, mode: TreeMode) -> String {
    let shown = tree_vertices(result, mode);
    let mut num = vec![usize::MAX; result.nodes.len()];
    for (i, &id) in shown.iter().enumerate() {
        num[id] = i;
    }
    let mut s = String::from("digraph tree {\n");
    for &id in &shown {
        let n = &result.nodes[id];
        let mut attrs = format!("label=\"{}\\n2^{} c{}\"", num[id], n.presentation.len(), n.class);
        if n.candidate {
            attrs.push_str(", shape=box");
        }
        if n.capped {
            attrs.push_str(", style=dashed");
        }
        writeln!(s, "  v{} [{attrs}, tooltip=\"{}\"];", num[id], n.label).unwrap();
    }
    for &id in &shown {
        for &c in &result.nodes[id].children {
            if num[c] != usize::MAX {
                writeln!(s, "  v{} -> v{};", num[id], num[c]).unwrap();
            }
        }
    }
    s.push_str("}\n");
    s
}

/// Candidate presentations, each preceded by a comment line naming it.
pub fn export_candidates(result: &SearchResult, ids: &[usize]) -> String {
    let mut s = String::new();
    for &id in ids {
        let n = &result.nodes[id];
        writeln!(s, "# {} order 2^{} class {}", n.label, n.presentation.len(), n.class).unwrap();
        s.push_str(&n.presentation.to_text());
        if !s.ends_with('\n') {
            s.push('\n');
        }
        s.push('\n');
    }
    s
}

/// Longest list of groups printed by name in a report.
const LIST_LIMIT: usize = 12;

fn labels(result: &SearchResult, ids: &[usize]) -> String {
    if ids.len() > LIST_LIMIT {
        return ids.len().to_string();
    }
    let v: Vec<String> =
        ids.iter().map(|&i| format!("{}(2^{})", result.nodes[i].label, result.nodes[i].presentation.len())).collect();
    format!("{} [{}]", ids.len(), v.join(", "))
}

/// Plain-text summary of the stages of one run.
pub fn report(title: &str, runs: &[StageRun]) -> String {
    let mut s = String::new();
    writeln!(s, "{title}").unwrap();
    for run in runs {
        let r = &run.result;
        writeln!(s, "stage {} ({})", run.stage + 1, run.name).unwrap();
        writeln!(s, "  status: {}", r.status).unwrap();
        writeln!(s, "  class  groups  pairs  candidates").unwrap();
        for l in &r.levels {
            writeln!(s, "  {:>5}  {:>6}  {:>5}  {:>10}", l.class, l.groups, l.pairs, l.candidates).unwrap();
        }
        let cands = r.candidates();
        writeln!(s, "  candidates: {}", cands.len()).unwrap();
        let mut under: Vec<(String, usize)> = Vec::new();
        for &c in &cands {
            let anc = r.ancestors(c);
            let top = if anc.len() >= 2 { anc[anc.len() - 2] } else { c };
            let lab = r.nodes[top].label.clone();
            match under.iter_mut().find(|(l, _)| *l == lab) {
                Some(e) => e.1 += 1,
                None => under.push((lab, 1)),
            }
        }
        for (l, k) in &under {
            writeln!(s, "    below {l}: {k}").unwrap();
        }
        if !run.level_groups.is_empty() {
            writeln!(s, "  groups at class {}: {}", r.nodes[run.level_groups[0]].class, labels(r, &run.level_groups)).unwrap();
            writeln!(s, "  with immediate descendants: {}", labels(r, &run.capable)).unwrap();
            writeln!(s, "  survivors: {}", labels(r, &run.survivors)).unwrap();
            writeln!(s, "  after quotient filter: {}", labels(r, &run.filtered_survivors)).unwrap();
        }
        if run.filtered_candidates.len() != cands.len() {
            writeln!(s, "  candidates after subgroup filter: {}", labels(r, &run.filtered_candidates)).unwrap();
        }
    }
    s
}

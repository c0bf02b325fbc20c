use crate::bitset::VertexSet;
use crate::budget::{Budget, Interrupted};
use crate::graph::Graph;

use super::structure::is_bipartite;

struct MaxClique<'a> {
    adj: Vec<VertexSet>,
    budget: &'a Budget,
    best: usize,
}

impl MaxClique<'_> {
    /// Greedy sequential coloring of `p`; returns vertices in color order
    /// with their color numbers (1-based).
    fn color_sort(&self, p: &VertexSet) -> Vec<(usize, usize)> {
        let mut out = Vec::with_capacity(p.len());
        let mut uncolored = p.clone();
        let mut color = 0;
        while !uncolored.is_empty() {
            color += 1;
            let mut avail = uncolored.clone();
            while let Some(v) = avail.first() {
                avail.remove(v);
                avail.difference_with(&self.adj[v]);
                uncolored.remove(v);
                out.push((v, color));
            }
        }
        out
    }

    fn expand(&mut self, size: usize, mut p: VertexSet) -> Result<(), Interrupted> {
        self.budget.check()?;
        let order = self.color_sort(&p);
        for &(v, color) in order.iter().rev() {
            if size + color <= self.best {
                return Ok(());
            }
            let next = p.intersection(&self.adj[v]);
            if next.is_empty() {
                self.best = self.best.max(size + 1);
            } else {
                self.expand(size + 1, next)?;
            }
            p.remove(v);
        }
        Ok(())
    }
}

pub fn clique_number(g: &Graph, budget: &Budget) -> Result<usize, Interrupted> {
    let n = g.order();
    let mut search = MaxClique { adj: g.adjacency_sets(), budget, best: 0 };
    search.expand(0, VertexSet::full(n))?;
    Ok(search.best)
}

pub fn independence_number(g: &Graph, budget: &Budget) -> Result<usize, Interrupted> {
    clique_number(&g.complement(), budget)
}

struct Domination<'a> {
    closed: Vec<VertexSet>,
    budget: &'a Budget,
    best: usize,
}

impl Domination<'_> {
    fn search(&mut self, undominated: &VertexSet, excluded: &mut VertexSet, chosen: usize) -> Result<(), Interrupted> {
        self.budget.check()?;
        if undominated.is_empty() {
            self.best = self.best.min(chosen);
            return Ok(());
        }
        if chosen + 1 >= self.best {
            return Ok(());
        }
        let n = self.closed.len();
        let mut max_cover = 0;
        for w in 0..n {
            if !excluded.contains(w) {
                max_cover = max_cover.max(self.closed[w].intersection_len(undominated));
            }
        }
        if max_cover == 0 || chosen + undominated.len().div_ceil(max_cover) >= self.best {
            return Ok(());
        }
        // branch on the undominated vertex with the fewest possible dominators
        let mut pick = None;
        let mut fewest = usize::MAX;
        for u in undominated.iter() {
            let options = self.closed[u].difference(excluded).len();
            if options < fewest {
                fewest = options;
                pick = Some(u);
            }
        }
        let u = pick.expect("undominated is non-empty");
        if fewest == 0 {
            return Ok(());
        }
        let mut options: Vec<(usize, usize)> = self.closed[u]
            .difference(excluded)
            .iter()
            .map(|w| (self.closed[w].intersection_len(undominated), w))
            .collect();
        options.sort_by(|a, b| b.cmp(a));
        let mut newly_excluded = Vec::new();
        for (_, w) in options {
            let rest = undominated.difference(&self.closed[w]);
            self.search(&rest, excluded, chosen + 1)?;
            excluded.insert(w);
            newly_excluded.push(w);
        }
        for w in newly_excluded {
            excluded.remove(w);
        }
        Ok(())
    }
}

pub fn domination_number(g: &Graph, budget: &Budget) -> Result<usize, Interrupted> {
    let n = g.order();
    let closed: Vec<VertexSet> = g
        .adjacency_sets()
        .into_iter()
        .enumerate()
        .map(|(v, mut s)| {
            s.insert(v);
            s
        })
        .collect();
    // greedy upper bound
    let mut undominated = VertexSet::full(n);
    let mut greedy = 0;
    while !undominated.is_empty() {
        let w = (0..n)
            .max_by_key(|&w| (closed[w].intersection_len(&undominated), std::cmp::Reverse(w)))
            .expect("graph is non-empty");
        undominated.difference_with(&closed[w]);
        greedy += 1;
    }
    let mut search = Domination { closed, budget, best: greedy };
    search.search(&VertexSet::full(n), &mut VertexSet::new(n), 0)?;
    Ok(search.best)
}

/// Exact k-colorability by DSATUR-ordered backtracking.
struct Colorer<'a> {
    adj: Vec<VertexSet>,
    budget: &'a Budget,
    color: Vec<usize>,
    k: usize,
}

const UNCOLORED: usize = usize::MAX;

impl Colorer<'_> {
    fn new<'a>(g: &Graph, k: usize, budget: &'a Budget) -> Colorer<'a> {
        Colorer { adj: g.adjacency_sets(), budget, color: vec![UNCOLORED; g.order()], k }
    }

    fn used_colors(&self, v: usize) -> VertexSet {
        let mut used = VertexSet::new(self.k);
        for w in self.adj[v].iter() {
            if self.color[w] != UNCOLORED {
                used.insert(self.color[w]);
            }
        }
        used
    }

    fn solve(&mut self, colored: usize, max_used: usize) -> Result<bool, Interrupted> {
        self.budget.check()?;
        let n = self.color.len();
        if colored == n {
            return Ok(true);
        }
        let mut pick = None;
        let mut best_key = (0usize, 0usize);
        for v in 0..n {
            if self.color[v] != UNCOLORED {
                continue;
            }
            let sat = self.used_colors(v).len();
            let key = (sat, self.adj[v].len());
            if pick.is_none() || key > best_key {
                best_key = key;
                pick = Some(v);
            }
        }
        let v = pick.expect("an uncolored vertex exists");
        let used = self.used_colors(v);
        let limit = (max_used + 1).min(self.k);
        for c in 0..limit {
            if used.contains(c) {
                continue;
            }
            self.color[v] = c;
            if self.solve(colored + 1, max_used.max(c + 1))? {
                return Ok(true);
            }
        }
        self.color[v] = UNCOLORED;
        Ok(false)
    }
}

pub fn is_k_colorable(g: &Graph, k: usize, budget: &Budget) -> Result<bool, Interrupted> {
    if g.order() == 0 {
        return Ok(true);
    }
    if k == 0 {
        return Ok(false);
    }
    Colorer::new(g, k, budget).solve(0, 0)
}

/// Colors used by greedy DSATUR, an upper bound on the chromatic number.
fn dsatur_bound(g: &Graph, budget: &Budget) -> Result<usize, Interrupted> {
    let n = g.order();
    let adj = g.adjacency_sets();
    let mut color = vec![UNCOLORED; n];
    let mut used_total = 0;
    for _ in 0..n {
        budget.check()?;
        let v = (0..n)
            .filter(|&v| color[v] == UNCOLORED)
            .max_by_key(|&v| {
                let mut seen: Vec<usize> = adj[v].iter().map(|w| color[w]).filter(|&c| c != UNCOLORED).collect();
                seen.sort_unstable();
                seen.dedup();
                (seen.len(), adj[v].len(), std::cmp::Reverse(v))
            })
            .expect("an uncolored vertex exists");
        let taken: Vec<usize> = adj[v].iter().map(|w| color[w]).collect();
        let c = (0..).find(|c| !taken.contains(c)).expect("some color is free");
        color[v] = c;
        used_total = used_total.max(c + 1);
    }
    Ok(used_total)
}

pub fn chromatic_number(g: &Graph, budget: &Budget) -> Result<usize, Interrupted> {
    if g.size() == 0 {
        return Ok(g.order().min(1));
    }
    let lower = clique_number(g, budget)?;
    let upper = dsatur_bound(g, budget)?;
    for k in lower..upper {
        if is_k_colorable(g, k, budget)? {
            return Ok(k);
        }
    }
    Ok(upper)
}

pub fn line_graph(g: &Graph) -> Graph {
    let edges: Vec<(usize, usize)> = g.edges().collect();
    let mut incident: Vec<Vec<usize>> = vec![Vec::new(); g.order()];
    for (i, &(u, v)) in edges.iter().enumerate() {
        incident[u].push(i);
        incident[v].push(i);
    }
    let mut lines = Vec::new();
    for list in &incident {
        for (a, &i) in list.iter().enumerate() {
            for &j in &list[a + 1..] {
                lines.push((i, j));
            }
        }
    }
    Graph::from_edges_with_limit(edges.len(), lines, usize::MAX).expect("line graph edges are valid")
}

/// Chromatic index: Δ or Δ+1, decided by an exact Δ-coloring of the line
/// graph after the bipartite (König) and overfull shortcuts.
pub fn chromatic_index(g: &Graph, budget: &Budget) -> Result<usize, Interrupted> {
    let delta = g.max_degree();
    if delta <= 1 || is_bipartite(g) {
        return Ok(delta);
    }
    // every color class is a matching
    if g.size() > delta * (g.order() / 2) {
        return Ok(delta + 1);
    }
    if is_k_colorable(&line_graph(g), delta, budget)? {
        Ok(delta)
    } else {
        Ok(delta + 1)
    }
}

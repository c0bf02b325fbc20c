//! Full-scan search straight from the predicate definitions.

use std::cmp::Ordering;

use graphdb_core::invariants::InvariantValue;
use graphdb_core::scheduler::{GraphId, JobStatus};
use graphdb_core::search::{CmpOp, Number, Predicate, Query, SortDir, SortKey};
use graphdb_core::store::StoreState;
use num_bigint::BigInt;
use num_rational::BigRational;

const TOL: f64 = 1e-9;

fn exact(n: &Number) -> BigRational {
    match n {
        Number::Int(i) => BigRational::from_integer(i.clone()),
        Number::Real(x) => BigRational::from_float(*x).expect("finite operand"),
    }
}

fn holds(o: Ordering, op: CmpOp) -> bool {
    match op {
        CmpOp::Eq => o.is_eq(),
        CmpOp::Ne => o.is_ne(),
        CmpOp::Lt => o.is_lt(),
        CmpOp::Le => o.is_le(),
        CmpOp::Gt => o.is_gt(),
        CmpOp::Ge => o.is_ge(),
    }
}

fn compare(v: &InvariantValue, op: CmpOp, n: &Number) -> bool {
    match v {
        InvariantValue::Integer(i) => holds(BigRational::from_integer(i.clone()).cmp(&exact(n)), op),
        InvariantValue::Real(x) => {
            let y = match n {
                Number::Int(i) => i.to_string().parse::<f64>().unwrap(),
                Number::Real(y) => *y,
            };
            let o = if (x - y).abs() <= TOL { Ordering::Equal } else { x.partial_cmp(&y).unwrap() };
            holds(o, op)
        }
        InvariantValue::Bool(_) => false,
    }
}

fn done(s: &StoreState, id: GraphId, inv: graphdb_core::invariants::InvariantId) -> Option<InvariantValue> {
    match s.mlfq().record(id, inv) {
        Some(JobStatus::Done(v)) => Some(v.clone()),
        _ => None,
    }
}

pub fn satisfies(s: &StoreState, id: GraphId, p: &Predicate) -> bool {
    let g = s.graph(id).unwrap();
    match p {
        Predicate::NumericCmp { invariant, op, value } => done(s, id, *invariant).is_some_and(|v| compare(&v, *op, value)),
        Predicate::NumericRange { invariant, lo, hi } => {
            done(s, id, *invariant).is_some_and(|v| compare(&v, CmpOp::Ge, lo) && compare(&v, CmpOp::Le, hi))
        }
        Predicate::BoolIs { invariant, value } => done(s, id, *invariant) == Some(InvariantValue::Bool(*value)),
        Predicate::MarkedInteresting { invariant } => s.marks(id).any(|m| m.invariant == *invariant),
        Predicate::TextContains(t) => {
            let t = t.to_lowercase();
            g.name.iter().chain(s.comments(id).iter().map(|c| &c.text)).any(|x| x.to_lowercase().contains(&t))
        }
        Predicate::IdEquals(want) => id == *want,
        Predicate::IsomorphicTo { canonical } => &g.canonical == canonical,
    }
}

fn sort_key(s: &StoreState, id: GraphId, key: SortKey) -> Option<BigRational> {
    match key {
        SortKey::Id => Some(BigRational::from_integer(BigInt::from(id))),
        SortKey::Invariant(inv) => match done(s, id, inv)? {
            InvariantValue::Integer(i) => Some(BigRational::from_integer(i)),
            InvariantValue::Real(x) => BigRational::from_float(x),
            InvariantValue::Bool(_) => None,
        },
    }
}

/// Every match in result order, before paging.
pub fn scan(s: &StoreState, q: &Query) -> Vec<GraphId> {
    let mut ids: Vec<GraphId> = s.graphs().map(|g| g.id).filter(|&id| q.predicates.iter().all(|p| satisfies(s, id, p))).collect();
    ids.sort_by(|&a, &b| {
        let (ka, kb) = (sort_key(s, a, q.sort.key), sort_key(s, b, q.sort.key));
        let o = match (ka, kb) {
            (Some(x), Some(y)) if q.sort.dir == SortDir::Asc => x.cmp(&y),
            (Some(x), Some(y)) => y.cmp(&x),
            (Some(_), None) => Ordering::Less,
            (None, Some(_)) => Ordering::Greater,
            (None, None) => Ordering::Equal,
        };
        o.then(a.cmp(&b))
    });
    ids
}

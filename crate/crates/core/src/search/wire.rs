//! JSON form of queries shared by the HTTP API and the command line.

use num_bigint::BigInt;
use serde::{Deserialize, Serialize};
use serde_json::Value;

use crate::codecs::graph6_decode;
use crate::invariants::InvariantId;
use crate::scheduler::GraphId;

use super::{malformed, CmpOp, Number, Page, Predicate, Query, SearchError, Sort, SortDir, SortKey, DEFAULT_LIMIT};

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct WirePredicate {
    #[serde(rename = "type")]
    pub kind: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub invariant: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub op: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub value: Option<Value>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub lo: Option<Value>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub hi: Option<Value>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub text: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub id: Option<GraphId>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub graph6: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct WireSort {
    pub key: String,
    #[serde(default)]
    pub dir: SortDir,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct WirePage {
    #[serde(default)]
    pub offset: usize,
    #[serde(default = "default_limit")]
    pub limit: usize,
}

fn default_limit() -> usize {
    DEFAULT_LIMIT
}

impl Default for WirePage {
    fn default() -> Self {
        WirePage { offset: 0, limit: DEFAULT_LIMIT }
    }
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct WireQuery {
    #[serde(default)]
    pub predicates: Vec<WirePredicate>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub sort: Option<WireSort>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub page: Option<WirePage>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub columns: Vec<String>,
}

fn lookup(name: &str, index: Option<usize>) -> Result<InvariantId, SearchError> {
    InvariantId::lookup(name).ok_or_else(|| SearchError::UnknownInvariant { index, name: name.to_string() })
}

fn number(v: &Value, index: Option<usize>, field: &str) -> Result<Number, SearchError> {
    match v {
        Value::Number(n) => {
            if let Some(i) = n.as_i64() {
                Ok(Number::Int(i.into()))
            } else if let Some(u) = n.as_u64() {
                Ok(Number::Int(u.into()))
            } else {
                Ok(Number::Real(n.as_f64().expect("JSON numbers are finite")))
            }
        }
        Value::String(s) => {
            let s = s.trim();
            if let Ok(i) = s.parse::<BigInt>() {
                Ok(Number::Int(i))
            } else {
                s.parse::<f64>()
                    .ok()
                    .filter(|x| !x.is_nan())
                    .map(Number::Real)
                    .ok_or_else(|| malformed(index, format!("{field} {s:?} is not a number")))
            }
        }
        _ => Err(malformed(index, format!("{field} must be a number"))),
    }
}

fn number_value(n: &Number) -> Value {
    match n {
        Number::Int(i) => match i64::try_from(i) {
            Ok(v) => Value::from(v),
            Err(_) => Value::String(i.to_string()),
        },
        Number::Real(x) => serde_json::Number::from_f64(*x).map(Value::Number).unwrap_or_else(|| Value::String(x.to_string())),
    }
}

impl WirePredicate {
    pub fn to_predicate(&self, index: usize) -> Result<Predicate, SearchError> {
        let at = Some(index);
        let need = |field: &str| malformed(at, format!("{} predicate needs {field}", self.kind));
        let invariant = || -> Result<InvariantId, SearchError> {
            lookup(self.invariant.as_deref().ok_or_else(|| need("invariant"))?, at)
        };
        let p = match self.kind.as_str() {
            "numeric_cmp" => {
                let op = self.op.as_deref().ok_or_else(|| need("op"))?;
                let op = CmpOp::parse(op).ok_or_else(|| malformed(at, format!("unknown operator {op:?}")))?;
                let value = number(self.value.as_ref().ok_or_else(|| need("value"))?, at, "value")?;
                Predicate::NumericCmp { invariant: invariant()?, op, value }
            }
            "numeric_range" => Predicate::NumericRange {
                invariant: invariant()?,
                lo: number(self.lo.as_ref().ok_or_else(|| need("lo"))?, at, "lo")?,
                hi: number(self.hi.as_ref().ok_or_else(|| need("hi"))?, at, "hi")?,
            },
            "bool_is" => {
                let value = match self.value.as_ref().ok_or_else(|| need("value"))? {
                    Value::Bool(b) => *b,
                    Value::String(s) if s.eq_ignore_ascii_case("true") => true,
                    Value::String(s) if s.eq_ignore_ascii_case("false") => false,
                    _ => return Err(malformed(at, "value must be true or false")),
                };
                Predicate::BoolIs { invariant: invariant()?, value }
            }
            "marked_interesting" => Predicate::MarkedInteresting { invariant: invariant()? },
            "text_contains" => Predicate::TextContains(self.text.clone().ok_or_else(|| need("text"))?),
            "id_equals" => Predicate::IdEquals(self.id.ok_or_else(|| need("id"))?),
            "isomorphic_to" => {
                let g6 = self.graph6.as_deref().ok_or_else(|| need("graph6"))?;
                let g = graph6_decode(g6).map_err(|e| malformed(at, format!("graph6: {e}")))?;
                Predicate::isomorphic_to(&g)
            }
            other => return Err(malformed(at, format!("unknown predicate type {other:?}"))),
        };
        p.validate(at)?;
        Ok(p)
    }

    pub fn from_predicate(p: &Predicate) -> Self {
        let base = |kind: &str| WirePredicate { kind: kind.to_string(), ..WirePredicate::default() };
        match p {
            Predicate::NumericCmp { invariant, op, value } => WirePredicate {
                invariant: Some(invariant.to_string()),
                op: Some(op.as_str().to_string()),
                value: Some(number_value(value)),
                ..base("numeric_cmp")
            },
            Predicate::NumericRange { invariant, lo, hi } => WirePredicate {
                invariant: Some(invariant.to_string()),
                lo: Some(number_value(lo)),
                hi: Some(number_value(hi)),
                ..base("numeric_range")
            },
            Predicate::BoolIs { invariant, value } => WirePredicate {
                invariant: Some(invariant.to_string()),
                value: Some(Value::Bool(*value)),
                ..base("bool_is")
            },
            Predicate::MarkedInteresting { invariant } => {
                WirePredicate { invariant: Some(invariant.to_string()), ..base("marked_interesting") }
            }
            Predicate::TextContains(t) => WirePredicate { text: Some(t.clone()), ..base("text_contains") },
            Predicate::IdEquals(id) => WirePredicate { id: Some(*id), ..base("id_equals") },
            Predicate::IsomorphicTo { canonical } => {
                WirePredicate { graph6: Some(canonical.clone()), ..base("isomorphic_to") }
            }
        }
    }
}

impl WireQuery {
    pub fn to_query(&self) -> Result<Query, SearchError> {
        let predicates =
            self.predicates.iter().enumerate().map(|(i, p)| p.to_predicate(i)).collect::<Result<Vec<_>, _>>()?;
        let sort = match &self.sort {
            None => Sort::default(),
            Some(s) => Sort {
                key: if s.key.eq_ignore_ascii_case("id") { SortKey::Id } else { SortKey::Invariant(lookup(&s.key, None)?) },
                dir: s.dir,
            },
        };
        let page = self.page.map(|p| Page { offset: p.offset, limit: p.limit }).unwrap_or_default();
        let columns = self.columns.iter().map(|c| lookup(c, None)).collect::<Result<Vec<_>, _>>()?;
        let q = Query { predicates, sort, page, columns };
        q.validate()?;
        Ok(q)
    }

    pub fn from_query(q: &Query) -> Self {
        WireQuery {
            predicates: q.predicates.iter().map(WirePredicate::from_predicate).collect(),
            sort: Some(WireSort {
                key: match q.sort.key {
                    SortKey::Id => "id".to_string(),
                    SortKey::Invariant(inv) => inv.to_string(),
                },
                dir: q.sort.dir,
            }),
            page: Some(WirePage { offset: q.page.offset, limit: q.page.limit }),
            columns: q.columns.iter().map(|c| c.to_string()).collect(),
        }
    }
}

impl std::str::FromStr for WireQuery {
    type Err = SearchError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        serde_json::from_str(s).map_err(|e| malformed(None, e.to_string()))
    }
}

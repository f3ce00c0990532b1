//! Fixtures and random generators shared by the integration tests.
#![allow(dead_code)]

use std::fmt::Write as _;
use std::path::PathBuf;
use std::sync::Arc;

use fdiagram::dsl::{parse_schema, parse_script, Mutation};
use fdiagram::engine::{Session, Verdict};
use fdiagram::model::{Codomain, FunctionId, RowId, ScalarType, Schema, SetId, Value};
use fdiagram::oracle::full_check;
use fdiagram::store::{Database, RowOp, StoreState};
use rand::seq::IndexedRandom;
use rand::Rng;

pub fn fixture(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR"))
        .join("tests/fixtures")
        .join(name)
}

pub fn read_fixture(name: &str) -> String {
    std::fs::read_to_string(fixture(name)).expect("fixture exists")
}

pub fn load_schema(name: &str) -> Arc<Schema> {
    Arc::new(parse_schema(&read_fixture(name)).expect("fixture schema is valid"))
}

/// One replayed statement with the states around it.
pub struct Step {
    pub mutation: Mutation,
    pub verdict: Verdict,
    pub before: StoreState,
    pub after: StoreState,
}

/// Replays a fixture script under enforcement.
pub fn replay(schema: &Arc<Schema>, script: &str) -> (Session, Vec<Step>) {
    let mutations = parse_script(&read_fixture(script), schema).expect("fixture script is valid");
    let mut session = Session::new(Arc::clone(schema));
    let steps = mutations
        .into_iter()
        .map(|mutation| {
            let before = session.db().snapshot();
            let verdict = session.apply(&mutation);
            let after = session.db().snapshot();
            Step {
                mutation,
                verdict,
                before,
                after,
            }
        })
        .collect();
    (session, steps)
}

/// A generated schema. `frozen` is a nullable link kept null everywhere.
pub struct RandomSchema {
    pub source: String,
    pub schema: Arc<Schema>,
    pub frozen: Option<FunctionId>,
}

enum End {
    Text,
    Integer,
    Link,
}

struct SetText {
    name: String,
    members: Vec<String>,
}

impl SetText {
    fn new(name: &str) -> Self {
        Self {
            name: name.to_string(),
            members: vec!["name N : text;".into()],
        }
    }
}

/// Schemas of one or two GENERAL constraints, each on its own sets. Chains
/// have 1 to 6 functions; the two sides may share their outermost part.
/// With `freeze` there is one constraint; it ends in a set and one of its left
/// links is nullable and reported as `frozen`.
pub fn random_schema<R: Rng + ?Sized>(rng: &mut R, freeze: bool) -> RandomSchema {
    let constraints = if !freeze && rng.random_bool(0.3) {
        2
    } else {
        1
    };
    let mut sets: Vec<SetText> = Vec::new();
    let mut decls = String::new();
    let mut frozen_name = None;
    for c in 0..constraints {
        let p = format!("C{c}");
        let end = if freeze && c == 0 {
            End::Link
        } else {
            [End::Text, End::Integer, End::Link]
                .into_iter()
                .nth(rng.random_range(0..3))
                .unwrap()
        };
        let (n, m) = loop {
            let n = rng.random_range(1..=6);
            let m = rng.random_range(1..=6);
            if n > 1 || m > 1 {
                break (n, m);
            }
        };
        let shared = if n.min(m) >= 2 && rng.random_bool(0.4) {
            rng.random_range(1..n.min(m))
        } else {
            0
        };
        let freeze_at = (freeze && c == 0).then(|| rng.random_range(1..=n));
        let domain = format!("{p}_D");
        let endpoint = format!("{p}_E");
        if matches!(end, End::Link) {
            sets.push(SetText::new(&endpoint));
        }
        // dom(fⱼ) for j < len is a fresh set unless shared; the domain hosts
        // position len.
        let mut left_sets = Vec::new();
        let mut right_sets = Vec::new();
        for (tag, len, out) in [("L", n, &mut left_sets), ("R", m, &mut right_sets)] {
            for j in 1..=len {
                let name = if j == len {
                    domain.clone()
                } else if tag == "R" && j <= shared {
                    format!("{p}_L{j}")
                } else {
                    let name = format!("{p}_{tag}{j}");
                    sets.push(SetText::new(&name));
                    name
                };
                out.push(name);
            }
        }
        sets.push(SetText::new(&domain));

        let mut chains: [Vec<String>; 2] = [Vec::new(), Vec::new()];
        for (side, (tag, dom_sets)) in [("l", &left_sets), ("r", &right_sets)]
            .into_iter()
            .enumerate()
        {
            for j in 1..=dom_sets.len() {
                if side == 1 && j <= shared {
                    chains[1].push(chains[0][j - 1].clone());
                    continue;
                }
                let name = format!("{p}{tag}{j}");
                let nullable = if freeze_at == Some(j) && side == 0 {
                    frozen_name = Some((dom_sets[j - 1].clone(), name.clone()));
                    true
                } else {
                    rng.random_bool(0.5)
                };
                let q = if nullable { " ?" } else { "" };
                let member = if j == 1 {
                    match end {
                        End::Text => format!("{name} : text{q};"),
                        End::Integer => format!("{name} : integer{q};"),
                        End::Link => format!("{name} -> {endpoint}{q};"),
                    }
                } else {
                    format!("{name} -> {}{q};", dom_sets[j - 2])
                };
                let host = sets
                    .iter_mut()
                    .find(|s| s.name == dom_sets[j - 1])
                    .expect("declared");
                host.members.push(member);
                chains[side].push(name);
            }
        }
        let kind = if rng.random_bool(0.5) {
            "commutative"
        } else {
            "anticommutative"
        };
        let _ = writeln!(
            decls,
            "constraint K{c} {kind} on {domain} {{ left = {}; right = {}; }}",
            chains[0].join(" . "),
            chains[1].join(" . ")
        );
    }
    let mut source = String::from("schema random;\n");
    for s in &sets {
        let _ = writeln!(source, "set {} {{ {} }}", s.name, s.members.join(" "));
    }
    source.push_str(&decls);
    let schema = Arc::new(
        parse_schema(&source)
            .unwrap_or_else(|d| panic!("generated schema is valid: {d:?}\n{source}")),
    );
    let frozen = frozen_name.map(|(set, f)| {
        let set = schema.set_by_name(&set).unwrap();
        schema.function_on(set, &f).unwrap()
    });
    RandomSchema {
        source,
        schema,
        frozen,
    }
}

/// Biased toward the first few choices so that chains collide often.
fn skewed<'a, T, R: Rng + ?Sized>(rng: &mut R, items: &'a [T]) -> Option<&'a T> {
    if items.len() > 1 && rng.random_bool(0.6) {
        items.get(rng.random_range(0..items.len().min(2)))
    } else {
        items.choose(rng)
    }
}

/// A random legal value for `f`, null with probability `null_rate` when
/// nullable. `frozen` is always null.
pub fn random_value<R: Rng + ?Sized>(
    db: &Database,
    rng: &mut R,
    f: FunctionId,
    null_rate: f64,
    frozen: Option<FunctionId>,
) -> Option<Value> {
    let schema = db.schema();
    let def = schema.function(f);
    if Some(f) == frozen || (def.nullable && rng.random_bool(null_rate)) {
        return None;
    }
    if schema.set(def.domain).name_attribute == f {
        return Some(Value::Text(format!("n{}", rng.random_range(0..1000))));
    }
    match def.codomain {
        Codomain::Scalar(ScalarType::Text) => Some(Value::Text(
            skewed(rng, &["a", "b", "c"]).unwrap().to_string(),
        )),
        Codomain::Scalar(ScalarType::Integer) => {
            Some(Value::Integer(*skewed(rng, &[0, 1, 2]).unwrap()))
        }
        Codomain::Set(target) => {
            let rows: Vec<RowId> = db.rows(target).collect();
            match skewed(rng, &rows) {
                Some(row) => Some(Value::Row(*row)),
                // An empty target makes a required link unsatisfiable; the
                // store reports it.
                None => Some(Value::Row(RowId::new(target, u64::MAX))),
            }
        }
    }
}

fn all_values<R: Rng + ?Sized>(
    db: &Database,
    rng: &mut R,
    set: SetId,
    frozen: Option<FunctionId>,
) -> Vec<(FunctionId, Option<Value>)> {
    db.schema()
        .set(set)
        .functions
        .clone()
        .into_iter()
        .map(|f| (f, random_value(db, rng, f, 0.3, frozen)))
        .collect()
}

/// Fills every set, link targets first, with a row count drawn from `rows`.
pub fn populate<R: Rng + ?Sized>(
    db: &mut Database,
    rng: &mut R,
    rows: std::ops::RangeInclusive<usize>,
    frozen: Option<FunctionId>,
) {
    let schema = Arc::clone(db.schema());
    let mut done = vec![false; schema.sets().len()];
    while done.iter().any(|d| !d) {
        for set in schema.set_ids() {
            let ready =
                schema
                    .set(set)
                    .functions
                    .iter()
                    .all(|f| match schema.function(*f).codomain {
                        Codomain::Set(t) => done[t.0] || t == set,
                        Codomain::Scalar(_) => true,
                    });
            if done[set.0] || !ready {
                continue;
            }
            for _ in 0..rng.random_range(rows.clone()) {
                let values = all_values(db, rng, set, frozen);
                db.insert_row(set, &values)
                    .expect("populated links point at live rows");
            }
            done[set.0] = true;
        }
    }
}

/// Deletes every domain row that violates a constraint.
pub fn make_clean(db: &mut Database) {
    for v in full_check(db).violations {
        if db.contains(v.witness) {
            db.delete_row(v.witness)
                .expect("domain rows are not referenced");
        }
    }
    assert!(full_check(db).is_clean());
}

fn random_row<R: Rng + ?Sized>(db: &Database, rng: &mut R, set: SetId) -> Option<RowId> {
    let rows: Vec<RowId> = db.rows(set).collect();
    rows.choose(rng).copied()
}

/// A random operation, mostly on constraint domains. Some fail at the store.
pub fn random_op<R: Rng + ?Sized>(db: &Database, rng: &mut R, frozen: Option<FunctionId>) -> RowOp {
    let schema = Arc::clone(db.schema());
    let domains: Vec<SetId> = schema.constraints().iter().map(|c| c.domain).collect();
    let any_set = SetId(rng.random_range(0..schema.sets().len()));
    let domain = *domains.choose(rng).unwrap();
    let roll = rng.random_range(0..100);
    let update = |rng: &mut R, set: SetId| -> Option<RowOp> {
        let row = random_row(db, rng, set)?;
        let functions = &schema.set(set).functions;
        let count = rng.random_range(1..=functions.len().min(2));
        let mut chosen: Vec<FunctionId> = functions.choose_multiple(rng, count).copied().collect();
        chosen.sort();
        let values = chosen
            .into_iter()
            .map(|f| (f, random_value(db, rng, f, 0.25, frozen)))
            .collect();
        Some(RowOp::Update { row, values })
    };
    let op = match roll {
        0..30 => Some(RowOp::Insert {
            set: domain,
            values: all_values(db, rng, domain, frozen),
        }),
        30..65 => update(rng, domain),
        65..85 => update(rng, any_set),
        85..90 => Some(RowOp::Insert {
            set: any_set,
            values: all_values(db, rng, any_set, frozen),
        }),
        90..95 => random_row(db, rng, any_set).map(|row| RowOp::Delete { row }),
        _ => {
            // A dangling reference or a null in a required column.
            let set = any_set;
            let f = *schema.set(set).functions.choose(rng).unwrap();
            random_row(db, rng, set).map(|row| {
                let value = match schema.function(f).codomain {
                    Codomain::Set(t) => Some(Value::Row(RowId::new(t, 1 << 40))),
                    Codomain::Scalar(_) => None,
                };
                RowOp::Update {
                    row,
                    values: vec![(f, value)],
                }
            })
        }
    };
    op.unwrap_or(RowOp::Insert {
        set: domain,
        values: all_values(db, rng, domain, frozen),
    })
}

use std::path::{Path, PathBuf};

use serde::Serialize;
use serde_json::{json, Value};

use kruskal_cert::criteria::{
    check_split_corollary, check_symmetric_nonrank, flattening_bound, run_check, single_term_bound,
    tensor_rank_lb_mu, tensor_rank_lb_subset, waring_rank_lb, BoundMethod, BoundResult,
    Certificate, CriterionId, Params, Status,
};
use kruskal_cert::generators::{
    build_near_sharp_symmetric_instance, build_sharpness_symmetric_instance, find_circuit,
    fixture_by_name, fixture_catalog, identity_n_m, rng_from_seed, sharp_tensor_instance,
    sylvester_tight_instance, symmetric_identity, CircuitSpec, SharpnessInstance,
};
use kruskal_cert::io::{family_to_json, parse_family, sha256_hex, CertificateFile, Family};
use kruskal_cert::matroid::{ear_decomposition, family_components, separator_search};
use kruskal_cert::oracle::{
    all_decompositions, brute_force_rank, condition_u_bruteforce, dls_condition_six,
    dls_condition_three, dls_condition_two, rank_deficient_subset_search, reducibility_witness,
    subpartition_verify, uniqueness_bruteforce, uniqueness_symmetric, SearchBudget,
};
use kruskal_cert::subset::{check_cap, Subset};
use kruskal_cert::tensor::{family_sum, DimTable, KRankProfile};
use kruskal_cert::{Field, ProductFamily};

use crate::output::{emit, pretty, read, write_atomic, CliResult, Failure};
use crate::{
    BoundsArgs, BudgetArgs, CheckArgs, Command, DimsArgs, FileArgs, GenCommon, GenerateCommand,
    Method, OracleCommand, OraclePair, OraclePivot, RevalidateArgs,
};

pub fn run(cmd: Command) -> CliResult<u8> {
    match cmd {
        Command::Check(a) => check(&a),
        Command::Bounds(a) => bounds(&a),
        Command::Split(a) => split(&a),
        Command::Components(a) => components(&a),
        Command::Ears(a) => ears(&a),
        Command::Kranks(a) => kranks(&a),
        Command::Dims(a) => dims(&a),
        Command::Oracle(o) => oracle(o),
        Command::Generate(g) => generate(g),
        Command::Revalidate(a) => revalidate(&a),
    }
}

fn load(path: &Path) -> CliResult<(Family, String)> {
    let text = read(path)?;
    let fam =
        parse_family(&text).map_err(|e| Failure::input(format!("{}: {e}", path.display())))?;
    Ok((fam, text))
}

fn to_json<T: Serialize>(v: &T) -> Value {
    serde_json::to_value(v).expect("report serializes")
}

fn exit_of(status: Status) -> u8 {
    status.exit_code() as u8
}

fn labels(idx: &[usize]) -> Vec<usize> {
    idx.iter().map(|i| i + 1).collect()
}

fn parse_labels(text: &str, what: &str) -> CliResult<Vec<usize>> {
    text.split(',')
        .map(|t| {
            t.trim()
                .parse::<usize>()
                .map_err(|_| Failure::input(format!("{what}: bad label {t:?}")))
        })
        .collect()
}

fn params_of(a: &CheckArgs) -> CliResult<Params> {
    let partitions = if a.partitions.is_empty() {
        None
    } else {
        Some(
            a.partitions
                .iter()
                .map(|p| {
                    p.split('|')
                        .map(|b| parse_labels(b, "--partition"))
                        .collect::<CliResult<Vec<_>>>()
                })
                .collect::<CliResult<Vec<_>>>()?,
        )
    };
    Ok(Params {
        r: a.r,
        s: a.s,
        q: a.q,
        pivot: a.pivot,
        which: a.which,
        tau: a
            .tau
            .as_deref()
            .map(|t| parse_labels(t, "--tau"))
            .transpose()?,
        partitions,
        exhaustive: a.exhaustive,
        entry_budget: a.entry_budget,
        max_subset_n: a.max_subset_n,
    })
}

fn certify(id: CriterionId, fam: &Family, params: &Params) -> kruskal_cert::Result<Certificate> {
    match (id, fam) {
        (CriterionId::SymmetricNonrank, Family::Symmetric(s)) => {
            check_symmetric_nonrank(s, Params::require(params.r, "r")?)
        }
        (CriterionId::SymmetricNonrank, Family::Product(_)) => {
            Err(kruskal_cert::Error::InvalidParameter(
                "symmetric-nonrank needs a file with a \"symmetric\" block".into(),
            ))
        }
        _ => run_check(id, &fam.product()?, params),
    }
}

fn check(a: &CheckArgs) -> CliResult<u8> {
    let id: CriterionId = a.criterion.parse()?;
    let params = params_of(a)?;
    if a.file.is_dir() {
        return check_batch(a, id, &params);
    }
    let (fam, text) = load(&a.file)?;
    let cert = certify(id, &fam, &params)?;
    let file = CertificateFile::new(cert, text.as_bytes(), Some(a.file.display().to_string()));
    eprintln!("{}: {}", id, file.certificate.status);
    emit(&file.to_json(), a.out.as_deref())?;
    Ok(exit_of(file.certificate.status))
}

fn family_files(dir: &Path) -> CliResult<Vec<PathBuf>> {
    let entries =
        std::fs::read_dir(dir).map_err(|e| Failure::input(format!("{}: {e}", dir.display())))?;
    let mut files: Vec<PathBuf> = entries
        .filter_map(|e| e.ok().map(|e| e.path()))
        .filter(|p| {
            let name = p.file_name().and_then(|n| n.to_str()).unwrap_or("");
            name.ends_with(".json")
                && !name.ends_with(".cert.json")
                && !name.ends_with(".expected.json")
        })
        .collect();
    files.sort();
    Ok(files)
}

fn check_batch(a: &CheckArgs, id: CriterionId, params: &Params) -> CliResult<u8> {
    let out_dir = a
        .out
        .as_deref()
        .ok_or_else(|| Failure::input("batch mode needs --out DIR"))?;
    std::fs::create_dir_all(out_dir)
        .map_err(|e| Failure::input(format!("{}: {e}", out_dir.display())))?;
    let mut worst = 0u8;
    let mut rows = Vec::new();
    for path in family_files(&a.file)? {
        let outcome = load(&path).and_then(|(fam, text)| {
            let cert = certify(id, &fam, params)?;
            Ok(CertificateFile::new(
                cert,
                text.as_bytes(),
                Some(path.display().to_string()),
            ))
        });
        let stem = path
            .file_stem()
            .and_then(|s| s.to_str())
            .unwrap_or("family")
            .to_string();
        match outcome {
            Ok(file) => {
                let target = out_dir.join(format!("{stem}.{id}.cert.json"));
                write_atomic(&target, &file.to_json())?;
                let st = file.certificate.status;
                worst = worst.max(exit_of(st));
                rows.push(json!({"file": path.display().to_string(), "status": st, "certificate": target.display().to_string()}));
            }
            Err(f) => {
                eprintln!("{}: {}", path.display(), f.message);
                worst = worst.max(f.code);
                rows.push(
                    json!({"file": path.display().to_string(), "error": f.message, "exit": f.code}),
                );
            }
        }
    }
    emit(&pretty(&json!({"criterion": id, "results": rows})), None)?;
    Ok(worst)
}

fn bounds(a: &BoundsArgs) -> CliResult<u8> {
    let (fam, _) = load(&a.file)?;
    let f = fam.product()?;
    let methods = if a.methods.is_empty() {
        let mut m = vec![Method::Subset, Method::Mu, Method::Flattening];
        if fam.symmetric().is_some() {
            m.push(Method::Waring);
        }
        m
    } else {
        a.methods.clone()
    };
    let results = methods
        .iter()
        .map(|m| -> CliResult<BoundResult> {
            if f.n() == 1 {
                return Ok(single_term_bound(match m {
                    Method::Subset => BoundMethod::Subset,
                    Method::Mu => BoundMethod::Mu,
                    Method::Flattening => BoundMethod::Flattening,
                    Method::Waring => BoundMethod::Waring,
                }));
            }
            Ok(match m {
                Method::Subset => tensor_rank_lb_subset(&f, a.max_subset_n)?,
                Method::Mu => tensor_rank_lb_mu(&f)?,
                Method::Flattening => flattening_bound(&f)?,
                Method::Waring => {
                    let s = fam.symmetric().ok_or_else(|| {
                        Failure::input("the waring bound needs a symmetric family")
                    })?;
                    waring_rank_lb(s)?
                }
            })
        })
        .collect::<CliResult<Vec<_>>>()?;
    let best = results
        .iter()
        .max_by_key(|b| b.lower_bound)
        .expect("at least one method");
    for b in &results {
        eprintln!("{:?}: {} ({})", b.method, b.lower_bound, b.status);
    }
    let report = json!({"n": f.n(), "bounds": results, "best": best.lower_bound, "best_method": best.method});
    emit(&pretty(&report), a.out.out.as_deref())?;
    Ok(0)
}

fn split(a: &FileArgs) -> CliResult<u8> {
    let f = load(&a.file)?.0.product()?;
    let v = f.assembled();
    let cert = check_split_corollary(&f)?;
    let sep = separator_search(&v)?;
    let report = match sep {
        Some(s) => {
            let rest = s.complement(f.n());
            eprintln!("splits: {:?} | {:?}", s.labels(), rest.labels());
            json!({
                "splits": true,
                "separator": s.labels(),
                "complement": rest.labels(),
                "dims": {"whole": v.span_dim(), "separator": v.span_dim_of(s), "complement": v.span_dim_of(rest)},
                "corollary": cert.witness,
            })
        }
        None => {
            eprintln!("does not split");
            json!({"splits": false, "separator": null, "corollary": cert.witness})
        }
    };
    emit(&pretty(&report), a.out.out.as_deref())?;
    Ok(0)
}

fn components(a: &FileArgs) -> CliResult<u8> {
    let f = load(&a.file)?.0.product()?;
    let parts = family_components(&f)?;
    let blocks: Vec<Vec<usize>> = parts.blocks.iter().map(|b| labels(b)).collect();
    eprintln!("{} block(s): {:?}", blocks.len(), blocks);
    emit(
        &pretty(&json!({"connected": parts.is_connected(), "blocks": blocks})),
        a.out.out.as_deref(),
    )?;
    Ok(0)
}

fn ears(a: &FileArgs) -> CliResult<u8> {
    let f = load(&a.file)?.0.product()?;
    let dec = ear_decomposition(&f.assembled())?;
    let ears: Vec<Value> = dec
        .ears
        .iter()
        .map(|e| json!({"circuit": labels(&e.circuit), "new_elements": labels(&e.new_elements), "span_dim": e.span_dim}))
        .collect();
    eprintln!("{} ear(s)", ears.len());
    emit(&pretty(&json!({"ears": ears})), a.out.out.as_deref())?;
    Ok(0)
}

fn kranks(a: &FileArgs) -> CliResult<u8> {
    let f = load(&a.file)?.0.product()?;
    let prof = KRankProfile::of(&f);
    eprintln!("k = {:?}, d = {:?}", prof.k, prof.d);
    emit(
        &pretty(&json!({"n": f.n(), "k": prof.k, "d": prof.d})),
        a.out.out.as_deref(),
    )?;
    Ok(0)
}

fn dims(a: &DimsArgs) -> CliResult<u8> {
    let f = load(&a.file)?.0.product()?;
    let dt = DimTable::with_cap(&f, a.max_subset_n);
    let full = dt.dims(Subset::full(f.n()));
    let mut report = json!({"n": f.n(), "d": full});
    if a.subsets {
        check_cap(f.n(), a.max_subset_n)?;
        let rows: Vec<Value> = dt
            .subsets(1, f.n())?
            .map(|s| json!({"subset": s.labels(), "dims": dt.dims(s)}))
            .collect();
        report["subsets"] = Value::from(rows);
    }
    eprintln!("d = {full:?}");
    emit(&pretty(&report), a.out.out.as_deref())?;
    Ok(0)
}

fn budget_of(b: &BudgetArgs) -> SearchBudget {
    let d = SearchBudget::default();
    SearchBudget {
        max_rank: b.max_rank.unwrap_or(d.max_rank),
        max_candidates: b.max_candidates.unwrap_or(d.max_candidates),
        time_limit_ms: b.time_limit_ms,
    }
}

/// The family over `F_p`, reducing a rational one by `--p`.
fn oracle_family(path: &Path, p: Option<u64>) -> CliResult<Family> {
    let fam = load(path)?.0;
    match (fam.field(), p) {
        (Field::Rational, None) => Err(Failure::input("--p is required for a rational family")),
        (Field::Rational, Some(p)) => Ok(match &fam {
            Family::Product(f) => Family::Product(f.reduce_mod(p)?),
            Family::Symmetric(s) => Family::Symmetric(s.reduce_mod(p)?),
        }),
        (Field::Prime { p: q }, Some(p)) if p != q => Err(Failure::input(format!(
            "family is over GF({q}) but --p {p} was given"
        ))),
        _ => Ok(fam),
    }
}

fn pivot_of(f: &ProductFamily, pivot: usize) -> CliResult<usize> {
    Params {
        pivot: Some(pivot),
        ..Params::default()
    }
    .pivot_index(f.m())
    .map_err(Failure::from)
}

fn holds(b: bool) -> u8 {
    if b {
        0
    } else {
        1
    }
}

fn oracle(cmd: OracleCommand) -> CliResult<u8> {
    match cmd {
        OracleCommand::Rank(o) => {
            let f = oracle_family(&o.file, o.budget.p)?.product()?;
            let rep = brute_force_rank(&family_sum(&f), f.mode_dims(), &budget_of(&o.budget))?;
            match rep.rank {
                Some(r) => eprintln!("rank {r} over GF({})", rep.p),
                None => eprintln!(
                    "rank > {} (at least {})",
                    rep.budget.max_rank, rep.lower_bound
                ),
            }
            emit(&pretty(&to_json(&rep)), o.out.out.as_deref())?;
            Ok(0)
        }
        OracleCommand::Decomps { inner, r } => {
            let f = oracle_family(&inner.file, inner.budget.p)?.product()?;
            let set =
                all_decompositions(&family_sum(&f), f.mode_dims(), r, &budget_of(&inner.budget))?;
            eprintln!("{} decomposition(s) with {r} terms", set.solutions.len());
            emit(&pretty(&to_json(&set)), inner.out.out.as_deref())?;
            Ok(0)
        }
        OracleCommand::Unique { inner, rmax } => {
            let fam = oracle_family(&inner.file, inner.budget.p)?;
            let b = budget_of(&inner.budget);
            let rep = match &fam {
                Family::Symmetric(s) => uniqueness_symmetric(s, rmax, &b)?,
                Family::Product(f) => uniqueness_bruteforce(f, rmax, &b)?,
            };
            eprintln!("{}", if rep.unique { "unique" } else { "not unique" });
            emit(&pretty(&to_json(&rep)), inner.out.out.as_deref())?;
            Ok(holds(rep.unique))
        }
        OracleCommand::ConditionU(o) => rank_condition(o, condition_u_bruteforce),
        OracleCommand::ConditionTwo(o) => rank_condition(o, dls_condition_two),
        OracleCommand::ConditionSix(o) => rank_condition(o, dls_condition_six),
        OracleCommand::ConditionThree(o) => {
            let f = oracle_family(&o.file, o.budget.p)?.product()?;
            let rep = dls_condition_three(&f, pivot_of(&f, o.pivot)?, &budget_of(&o.budget))?;
            eprintln!("{}", if rep.holds { "holds" } else { "fails" });
            emit(&pretty(&to_json(&rep)), o.out.out.as_deref())?;
            Ok(holds(rep.holds))
        }
        OracleCommand::Subpartition { inner, s, l } => {
            let (fx, fy, b) = pair(&inner)?;
            let w = subpartition_verify(&fx, &fy, s, l, &b)?;
            eprintln!(
                "{}",
                if w.is_some() {
                    "subpartition found"
                } else {
                    "no subpartition"
                }
            );
            emit(
                &pretty(&json!({"s": s, "l": l, "witness": w})),
                inner.out.out.as_deref(),
            )?;
            Ok(holds(w.is_some()))
        }
        OracleCommand::Reducible(inner) => {
            let (fx, fy, b) = pair(&inner)?;
            let w = reducibility_witness(&fx, &fy, &b)?;
            eprintln!(
                "{}",
                if w.is_some() {
                    "reducible"
                } else {
                    "irreducible"
                }
            );
            let report = match w {
                Some((q, r)) => json!({"reducible": true, "q": q, "r": r}),
                None => json!({"reducible": false}),
            };
            emit(&pretty(&report), inner.out.out.as_deref())?;
            Ok(holds(report["reducible"] == true))
        }
        OracleCommand::Deficient { inner, r_tilde } => {
            let f = oracle_family(&inner.file, inner.budget.p)?.product()?;
            let hit = rank_deficient_subset_search(&f, r_tilde, &budget_of(&inner.budget))?;
            eprintln!(
                "{}",
                if hit.is_some() {
                    "deficient subset found"
                } else {
                    "none"
                }
            );
            emit(
                &pretty(&json!({"r_tilde": r_tilde, "hit": hit})),
                inner.out.out.as_deref(),
            )?;
            Ok(holds(hit.is_some()))
        }
    }
}

type RankCheck = fn(
    &ProductFamily,
    usize,
    &SearchBudget,
) -> kruskal_cert::Result<kruskal_cert::oracle::RankConditionReport>;

fn rank_condition(o: OraclePivot, run: RankCheck) -> CliResult<u8> {
    let f = oracle_family(&o.file, o.budget.p)?.product()?;
    let rep = run(&f, pivot_of(&f, o.pivot)?, &budget_of(&o.budget))?;
    eprintln!(
        "{} ({} candidates)",
        if rep.holds { "holds" } else { "fails" },
        rep.checked
    );
    emit(&pretty(&to_json(&rep)), o.out.out.as_deref())?;
    Ok(holds(rep.holds))
}

fn pair(o: &OraclePair) -> CliResult<(ProductFamily, ProductFamily, SearchBudget)> {
    let load_p = |p: &Path| -> CliResult<ProductFamily> {
        let fam = load(p)?.0;
        let f = fam.product()?;
        Ok(match o.budget.p {
            Some(q) => f.reduce_mod(q)?,
            None => f,
        })
    };
    Ok((load_p(&o.first)?, load_p(&o.second)?, budget_of(&o.budget)))
}

fn field_of(p: Option<u64>) -> CliResult<Field> {
    match p {
        Some(p) => Ok(Field::prime(p)?),
        None => Ok(Field::Rational),
    }
}

fn family_value(f: &Family, name: &str) -> Value {
    serde_json::from_str(&family_to_json(f, Some(name))).expect("own output parses")
}

fn instance_families(inst: &SharpnessInstance) -> (Family, Family) {
    match (&inst.e_sym, &inst.f_sym) {
        (Some(e), Some(f)) => (Family::Symmetric(e.clone()), Family::Symmetric(f.clone())),
        _ => (
            Family::Product(inst.e.clone()),
            Family::Product(inst.f.clone()),
        ),
    }
}

fn write_instance(inst: &SharpnessInstance, out_dir: Option<&Path>) -> CliResult<u8> {
    let (e, f) = instance_families(inst);
    let meta = json!({
        "kind": inst.kind,
        "params": inst.params,
        "relation": inst.relation(),
        "near_sharp": inst.is_near_sharp(),
    });
    eprintln!(
        "|E| = {}, |F| = {}, {}",
        inst.params.n,
        inst.params.r,
        inst.relation()
    );
    match out_dir {
        Some(dir) => {
            std::fs::create_dir_all(dir)
                .map_err(|e| Failure::input(format!("{}: {e}", dir.display())))?;
            write_atomic(&dir.join("e.json"), &family_to_json(&e, Some("E")))?;
            write_atomic(&dir.join("f.json"), &family_to_json(&f, Some("F")))?;
            let mut m = meta;
            m["e"] = Value::from("e.json");
            m["f"] = Value::from("f.json");
            write_atomic(&dir.join("instance.json"), &pretty(&m))?;
        }
        None => {
            let mut m = meta;
            m["e"] = family_value(&e, "E");
            m["f"] = family_value(&f, "F");
            emit(&pretty(&m), None)?;
        }
    }
    Ok(0)
}

fn generate(cmd: GenerateCommand) -> CliResult<u8> {
    match cmd {
        GenerateCommand::Circuit {
            dims,
            symmetric,
            common,
            out,
        } => {
            let GenCommon { p, seed, attempts } = common;
            let field = field_of(p)?;
            let spec = CircuitSpec::for_dims(dims.clone(), symmetric)?;
            let mut rng = rng_from_seed(seed);
            let f = find_circuit(&spec, field, attempts, &mut rng)?.ok_or_else(|| {
                Failure::generation(format!(
                    "no circuit with dims {dims:?} over {field} after {attempts} attempts"
                ))
            })?;
            eprintln!("circuit of {} tensors over {field}, verified", f.n());
            emit(
                &family_to_json(&Family::Product(f), Some("circuit")),
                out.out.as_deref(),
            )?;
            Ok(0)
        }
        GenerateCommand::SharpTensor {
            dims,
            kranks,
            mode,
            n,
            common,
            out_dir,
        } => {
            if mode == 0 || mode > dims.len() {
                return Err(Failure::input(format!(
                    "--mode must lie in 1..={}",
                    dims.len()
                )));
            }
            let mut rng = rng_from_seed(common.seed);
            let inst = sharp_tensor_instance(
                field_of(common.p)?,
                &dims,
                &kranks,
                mode - 1,
                n,
                common.attempts,
                &mut rng,
            )?;
            write_instance(&inst, out_dir.as_deref())
        }
        GenerateCommand::SharpSymmetric {
            m,
            d,
            n,
            r,
            k,
            common,
            out_dir,
        } => {
            let field = field_of(common.p)?;
            let mut rng = rng_from_seed(common.seed);
            let inst = match k {
                Some(k) => {
                    let inst = build_near_sharp_symmetric_instance(
                        field,
                        m,
                        d,
                        k,
                        common.attempts,
                        &mut rng,
                    )?;
                    if n.is_some_and(|n| n != inst.params.n)
                        || r.is_some_and(|r| r != inst.params.r)
                    {
                        return Err(Failure::input(format!(
                            "with --k the sizes are fixed at n = {}, r = {}",
                            inst.params.n, inst.params.r
                        )));
                    }
                    inst
                }
                None => {
                    let (n, r) = n
                        .zip(r)
                        .ok_or_else(|| Failure::input("--n and --r are required without --k"))?;
                    build_sharpness_symmetric_instance(
                        field,
                        m,
                        d,
                        n,
                        r,
                        common.attempts,
                        &mut rng,
                    )?
                }
            };
            write_instance(&inst, out_dir.as_deref())
        }
        GenerateCommand::Sylvester { d, n, common, out } => {
            let mut rng = rng_from_seed(common.seed);
            let f = sylvester_tight_instance(field_of(common.p)?, d, n, common.attempts, &mut rng)?;
            eprintln!("matrix rank {}", 2 * d - n);
            emit(
                &family_to_json(&Family::Product(f), Some("sylvester")),
                out.out.as_deref(),
            )?;
            Ok(0)
        }
        GenerateCommand::Fixture { name, n, m, p, out } => {
            let field = field_of(p)?;
            let need = |v: Option<usize>, flag: &str| {
                v.ok_or_else(|| Failure::input(format!("{name} needs --{flag}")))
            };
            let fam = match name.as_str() {
                "identity" => Family::Product(identity_n_m(field, need(n, "n")?, need(m, "m")?)?),
                "symmetric-identity" => {
                    Family::Symmetric(symmetric_identity(field, need(n, "n")?, need(m, "m")?)?)
                }
                other => {
                    let fx = fixture_by_name(other).ok_or_else(|| {
                        let names: Vec<String> =
                            fixture_catalog().into_iter().map(|f| f.name).collect();
                        Failure::input(format!(
                            "unknown fixture {other:?}; known: identity, symmetric-identity, {}",
                            names.join(", ")
                        ))
                    })?;
                    match (fx.family, p) {
                        (Family::Product(f), Some(p)) => Family::Product(f.reduce_mod(p)?),
                        (Family::Symmetric(s), Some(p)) => Family::Symmetric(s.reduce_mod(p)?),
                        (fam, None) => fam,
                    }
                }
            };
            emit(&family_to_json(&fam, Some(&name)), out.out.as_deref())?;
            Ok(0)
        }
        GenerateCommand::Fixtures { out_dir } => {
            std::fs::create_dir_all(&out_dir)
                .map_err(|e| Failure::input(format!("{}: {e}", out_dir.display())))?;
            for fx in fixture_catalog() {
                write_atomic(
                    &out_dir.join(format!("{}.json", fx.name)),
                    &family_to_json(&fx.family, Some(&fx.name)),
                )?;
                let exp = json!({"name": fx.name, "description": fx.description, "expected": fx.expected});
                write_atomic(
                    &out_dir.join(format!("{}.expected.json", fx.name)),
                    &pretty(&exp),
                )?;
            }
            Ok(0)
        }
    }
}

fn revalidate(a: &RevalidateArgs) -> CliResult<u8> {
    let file = CertificateFile::parse(&read(&a.certificate)?)?;
    let cert = &file.certificate;
    let recomputed = cert.revalidate()?;
    if recomputed != cert.status {
        return Err(Failure::input(format!(
            "recorded status {} disagrees with the witness, which gives {recomputed}",
            cert.status
        )));
    }
    let mut rechecked = false;
    if let Some(path) = &a.family {
        let (fam, text) = load(path)?;
        if sha256_hex(text.as_bytes()) != file.input.sha256 {
            return Err(Failure::input(format!(
                "{} does not match the certified input hash",
                path.display()
            )));
        }
        let fresh = certify(cert.criterion, &fam, &cert.params)?;
        if fresh.status != cert.status || fresh.witness != cert.witness {
            return Err(Failure::input(
                "rerunning the criterion gives a different certificate",
            ));
        }
        rechecked = true;
    }
    eprintln!("{}: {} (consistent)", cert.criterion, recomputed);
    emit(
        &pretty(
            &json!({"criterion": cert.criterion, "status": recomputed, "consistent": true, "rechecked": rechecked}),
        ),
        None,
    )?;
    Ok(exit_of(recomputed))
}

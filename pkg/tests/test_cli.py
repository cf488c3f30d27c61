import pytest

from termsep.cli import main

STAR_SIG = "star/2\n"
FGC_SIG = "f/3\ng/2\nc/0\n"

S2 = "f(g(u,v),f(w,x,f(u,v,w)),c)"
T2 = "f(g(v,v),f(w,w,g(y,z)),c)"


@pytest.fixture
def star_sig(tmp_path):
    p = tmp_path / "star.sig"
    p.write_text(STAR_SIG)
    return str(p)


@pytest.fixture
def fgc_sig(tmp_path):
    p = tmp_path / "fgc.sig"
    p.write_text(FGC_SIG)
    return str(p)


def run(capsys, *args):
    code = main(list(args))
    return code, capsys.readouterr().out


def test_unify_star_example(capsys, star_sig):
    code, out = run(
        capsys,
        "unify",
        "--sig",
        star_sig,
        "star(star(x,y),star(z,y))",
        "star(z,star(star(x,y),star(x,x)))",
    )
    assert code == 0
    assert out.splitlines() == [
        "UNIFIABLE",
        "unifier: star(star(x,star(x,x)),star(star(x,star(x,x)),star(x,x)))",
        "substitution:",
        "  y -> star(x,x)",
        "  z -> star(x,star(x,x))",
    ]


def test_unify_identity_substitution(capsys, star_sig):
    code, out = run(capsys, "unify", "--sig", star_sig, "star(x,y)", "star(x,y)")
    assert code == 0
    assert "substitution: (identity)" in out


def test_unify_cycle_report(capsys, fgc_sig):
    code, out = run(
        capsys,
        "unify",
        "--sig",
        fgc_sig,
        "f(x,g(u,v),y)",
        "f(g(y,w),g(x,z),g(u,v))",
    )
    assert code == 1
    lines = out.splitlines()
    assert lines[0] == "NOT UNIFIABLE"
    assert lines[1] == "reason: subterm cycle"
    assert "replay: sound" in lines
    assert any("descend f2.g1 from 1" in line for line in lines)


def test_unify_conflict_records(capsys, fgc_sig):
    code, out = run(capsys, "unify", "--sig", fgc_sig, "--format", "records", S2, T2)
    assert code == 1
    lines = out.splitlines()
    assert lines[0] == "verdict=not-unifiable"
    assert lines[1] == "reason=conflict"
    assert lines[2] == "witness=g(y,z) ≡ f(u,v,w)"
    assert "replay=sound" in lines


def test_unify_trace_lists_all_merges(capsys, star_sig):
    code, out = run(
        capsys,
        "unify",
        "--sig",
        star_sig,
        "--trace",
        "star(star(x,y),star(z,y))",
        "star(z,star(star(x,y),star(x,x)))",
    )
    assert code == 0
    assert "trace (all merged statements):" in out
    assert "[given]" in out


def test_separate_records_golden(capsys, fgc_sig):
    code, out = run(capsys, "separate", "--sig", fgc_sig, "--format", "records", S2, T2)
    assert code == 1
    assert out == (
        "verdict=separated\n"
        "case=conflict\n"
        "summand=f[2] := x_3[1]\n"
        "summand=f[0] := x_2[2]\n"
        "summand=g[1] := 1\n"
        "algebra=indices: 0,1,2\n"
        "algebra=f[0] := x_2[2]\n"
        "algebra=f[2] := x_3[1]\n"
        "algebra=g[1] := 1\n"
        "symbolic=pass\n"
        "exhaustive=skipped\n"
        "verified=true\n"
    )


def test_separate_exhaustive_within_raised_limit(capsys, fgc_sig):
    code, out = run(
        capsys,
        "separate",
        "--sig",
        fgc_sig,
        "--format",
        "records",
        "--limit",
        str(1 << 18),
        S2,
        T2,
    )
    assert code == 1
    assert "exhaustive=pass\n" in out


def test_separate_variable_case_text(capsys, fgc_sig):
    code, out = run(capsys, "separate", "--sig", fgc_sig, "x", "g(x,y)")
    assert code == 1
    lines = out.splitlines()
    assert lines[0] == "NOT UNIFIABLE"
    assert lines[1] == "case: variable"
    assert lines[2] == "path: g1"
    assert "  g[0] := x_1[0] + 1" in lines
    assert "verification: symbolic PASS, exhaustive PASS" in lines


def test_separate_unifiable_input(capsys, fgc_sig):
    code, out = run(capsys, "separate", "--sig", fgc_sig, "x", "g(u,v)")
    assert code == 0
    assert out.splitlines()[0] == "UNIFIABLE (no separating algebra exists)"


def test_separate_trace_shows_deduction(capsys, fgc_sig):
    code, out = run(capsys, "separate", "--sig", fgc_sig, "--trace", S2, T2)
    assert code == 1
    assert "deduction:" in out
    assert "descend f2.f3 from 1" in out


def test_verify_round_trip(capsys, fgc_sig, tmp_path):
    code, out = run(capsys, "separate", "--sig", fgc_sig, "--format", "records", S2, T2)
    assert code == 1
    algebra_text = "".join(
        line[len("algebra=") :] + "\n"
        for line in out.splitlines()
        if line.startswith("algebra=")
    )
    algebra_file = tmp_path / "sep.alg"
    algebra_file.write_text(algebra_text)

    code, out = run(capsys, "verify", "--sig", fgc_sig, str(algebra_file), S2, T2)
    assert code == 0
    assert out.splitlines() == ["symbolic: PASS", "exhaustive: SKIPPED", "SEPARATED"]

    code, out = run(
        capsys,
        "verify",
        "--sig",
        fgc_sig,
        "--format",
        "records",
        "--limit",
        str(1 << 18),
        str(algebra_file),
        S2,
        T2,
    )
    assert code == 0
    assert out.splitlines() == [
        "symbolic=pass",
        "exhaustive=pass",
        "verdict=separated",
    ]


def test_verify_zero_algebra_fails(capsys, fgc_sig, tmp_path):
    algebra_file = tmp_path / "zero.alg"
    algebra_file.write_text("indices: 0\n")
    code, out = run(capsys, "verify", "--sig", fgc_sig, str(algebra_file), "x", "g(x,y)")
    assert code == 1
    assert out.splitlines() == ["symbolic: FAIL", "exhaustive: FAIL", "NOT SEPARATED"]


def test_verify_tampered_algebra_fails(capsys, fgc_sig, tmp_path):
    # dropping the flag line leaves s[0] + t[0] identically 0
    tampered = "indices: 0,1,2\nf[0] := x_2[2]\nf[2] := x_3[1]\n"
    algebra_file = tmp_path / "tampered.alg"
    algebra_file.write_text(tampered)
    code, out = run(
        capsys,
        "verify",
        "--sig",
        fgc_sig,
        "--limit",
        str(1 << 18),
        str(algebra_file),
        S2,
        T2,
    )
    assert code == 1
    assert "NOT SEPARATED" in out


def test_model_antiassociativity(capsys, star_sig, tmp_path):
    sentence = tmp_path / "anti.sent"
    sentence.write_text("!= star(star(x1,x2),x3) star(x1,star(x2,x3))\n")
    code, out = run(capsys, "model", "--sig", star_sig, str(sentence))
    assert code == 0
    assert out.splitlines() == [
        "MODEL",
        "universe size: 4",
        "algebra:",
        "  indices: 0,1",
        "  star[0] := x_1[1]",
        "  star[1] := x_1[1] + 1",
        "check: != star(star(x1,x2),x3) star(x1,star(x2,x3))  [cycle]"
        "  symbolic PASS, exhaustive PASS",
    ]


def test_model_records_reports_verified(capsys, star_sig, tmp_path):
    sentence = tmp_path / "anti.sent"
    sentence.write_text("!= star(star(x1,x2),x3) star(x1,star(x2,x3))\n")
    code, out = run(capsys, "model", "--sig", star_sig, "--format", "records", str(sentence))
    assert code == 0
    lines = out.splitlines()
    assert "verdict=model" in lines
    assert "universe=4" in lines
    assert "check1.case=cycle" in lines
    assert "check1.symbolic=pass" in lines
    assert "check1.exhaustive=pass" in lines
    assert lines[-1] == "verified=true"


def test_model_inconsistent(capsys, star_sig, tmp_path):
    sentence = tmp_path / "bad.sent"
    sentence.write_text("!= x x\n")
    code, out = run(capsys, "model", "--sig", star_sig, str(sentence))
    assert code == 1
    assert out.splitlines()[0] == "INCONSISTENT"
    assert "equation: != x x" in out


def test_model_relations_only(capsys, star_sig, tmp_path):
    sentence = tmp_path / "rel.sent"
    sentence.write_text("!R(x,y)\n!R(y,x)\n!Q\n")
    code, out = run(capsys, "model", "--sig", star_sig, str(sentence))
    assert code == 0
    lines = out.splitlines()
    assert "universe size: 1" in lines
    assert "relations (always false):" in lines
    assert "  R/2" in lines
    assert "  Q/0" in lines
    assert lines.count("  R/2") == 1  # deduplicated by name/arity


def test_corpus_clean_and_deterministic(capsys):
    code, first = run(capsys, "corpus", "--count", "40", "--seed", "7", "--format", "records")
    assert code == 0
    lines = first.splitlines()
    assert "pairs=40" in lines
    assert "seed=7" in lines
    assert "result=clean" in lines
    code, second = run(capsys, "corpus", "--count", "40", "--seed", "7", "--format", "records")
    assert code == 0
    assert first == second


def test_corpus_tamper_flag_fails(capsys):
    code, out = run(capsys, "corpus", "--count", "25", "--seed", "7", "--tamper")
    assert code == 1
    assert "RESULT: FAILURES DETECTED" in out
    assert "certificate failed verification" in out


def test_render_trees(capsys, star_sig):
    code, out = run(capsys, "render", "--sig", star_sig, "star(star(x,y),z)", "w")
    assert code == 0
    assert out == "star\n  star\n    x\n    y\n  z\n\nw\n"


def test_default_signature_is_available(capsys):
    code, out = run(capsys, "unify", "f(x,x,x)", "f(y,y,y)")
    assert code == 0


def test_input_errors_exit_2(capsys, fgc_sig, tmp_path):
    assert main(["unify", "--sig", fgc_sig, "f(x", "y"]) == 2
    assert main(["unify", "--sig", fgc_sig, "q(x)", "y"]) == 2
    assert main(["verify", "--sig", fgc_sig, str(tmp_path / "missing.alg"), "x", "y"]) == 2
    bad_alg = tmp_path / "bad.alg"
    bad_alg.write_text("indices: 0\nf[0] = 1\n")
    assert main(["verify", "--sig", fgc_sig, str(bad_alg), "x", "y"]) == 2
    bad_sent = tmp_path / "bad.sent"
    bad_sent.write_text("x = y\n")
    assert main(["model", "--sig", fgc_sig, str(bad_sent)]) == 2
    bad_sig = tmp_path / "bad.sig"
    bad_sig.write_text("f-3\n")
    assert main(["unify", "--sig", str(bad_sig), "x", "y"]) == 2
    err = capsys.readouterr().err
    assert err.count("error:") == 6


def test_usage_errors_exit_2(capsys):
    with pytest.raises(SystemExit) as exc:
        main(["separate", "--bogus-flag", "x", "y"])
    assert exc.value.code == 2
    with pytest.raises(SystemExit) as exc:
        main(["no-such-command"])
    assert exc.value.code == 2

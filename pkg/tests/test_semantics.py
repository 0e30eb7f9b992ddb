import pytest

from loopdmd import ValidationError, ast, check_source, parse_source, validate

from corpus import CORPUS, MATMUL


def diagnostics_of(source):
    with pytest.raises(ValidationError) as exc:
        check_source(source)
    return exc.value.diagnostics


def test_matmul_is_valid():
    v = check_source(MATMUL)
    assert v.params == ["M", "N", "K"]
    assert v.access_count == 4
    assert v.max_loop_depth == 3
    assert v.max_rank == 2


def test_corpus_is_valid():
    for entry in CORPUS:
        v = check_source(entry.source)
        assert v.access_count >= 1, entry.name


def test_variable_product_rejected():
    source = "params N;\narray A[N];\nfor i in 0 .. N {\n  for j in 0 .. N {\n    read A[i * j];\n  }\n}\n"
    diags = diagnostics_of(source)
    assert any(d.category == "non-affine" and "product of two variables" in d.message for d in diags)


def test_param_times_iterator_rejected():
    diags = diagnostics_of("params N;\narray A[N];\nfor i in 0 .. N {\n  read A[N * i];\n}\n")
    assert any(d.category == "non-affine" for d in diags)


def test_constant_product_accepted():
    check_source("params N;\narray A[N];\nfor i in 0 .. N {\n  read A[(1 + 2) * i];\n}\n")


def test_rank_mismatch_message():
    diags = diagnostics_of("params N;\narray A[N, N];\nfor i in 0 .. N {\n  read A[i];\n}\n")
    assert any(
        d.category == "rank-mismatch" and "expected 2 subscripts, found 1" in d.message
        for d in diags
    )


def test_loop_shadowing_rejected():
    source = "params N, M;\narray A[N];\nfor i in 0 .. N {\n  for i in 0 .. M {\n    read A[i];\n  }\n}\n"
    diags = diagnostics_of(source)
    assert any(d.category == "shadowing" for d in diags)


def test_param_shadowing_rejected():
    diags = diagnostics_of("params N;\narray A[N];\nfor N in 0 .. 3 {\n  read A[N];\n}\n")
    assert any(d.category == "shadowing" for d in diags)


def test_duplicate_params_rejected():
    diags = diagnostics_of("params N, N;\narray A[N];\nread A[0];\n")
    assert any(d.category == "duplicate-param" for d in diags)


def test_array_name_colliding_with_param():
    diags = diagnostics_of("params N;\narray N[N];\nread N[0];\n")
    assert any(d.category == "duplicate-array" for d in diags)


def test_unknown_variable_and_array():
    diags = diagnostics_of("params N;\narray A[N];\nread A[q];\nread B[0];\n")
    cats = {d.category for d in diags}
    assert "unknown-variable" in cats and "unknown-array" in cats


def test_extent_must_use_params_only():
    diags = diagnostics_of("params N;\narray A[x];\nread A[0];\n")
    assert any(d.category == "invalid-extent" for d in diags)


def test_zero_step_rejected():
    diags = diagnostics_of("params N;\narray A[N];\nfor i in 0 .. N step 0 {\n  read A[i];\n}\n")
    assert any(d.category == "invalid-step" for d in diags)


def test_nonconstant_divisor_rejected():
    diags = diagnostics_of(
        "params N;\narray A[N];\nfor i in 0 .. N {\n  for j in 0 .. N {\n    read A[i / j];\n  }\n}\n"
    )
    assert any("divisor" in d.message for d in diags)


def test_all_violations_reported_in_one_pass():
    source = (
        "params N, N;\narray A[N, N];\n"
        "for i in 0 .. N {\n  for i in 0 .. N {\n    read A[i];\n    read B[i * i];\n  }\n}\n"
    )
    diags = diagnostics_of(source)
    cats = {d.category for d in diags}
    assert {"duplicate-param", "shadowing", "rank-mismatch", "unknown-array"} <= cats
    assert len(diags) >= 4


def test_spans_inside_source():
    source = "params N;\narray A[N];\nfor i in 0 .. N {\n  read A[i * i];\n}\n"
    diags = diagnostics_of(source)
    for d in diags:
        assert 0 <= d.start <= d.end <= len(source)


def test_every_var_resolves_once():
    for entry in CORPUS:
        v = check_source(entry.source)
        unresolved = []

        def walk_expr(e):
            for var in ast.expr_vars(e):
                if id(var) not in v.var_binding:
                    unresolved.append(var.name)

        def walk(stmts):
            for s in stmts:
                if isinstance(s, ast.Access):
                    for e in s.subscripts:
                        walk_expr(e)
                elif isinstance(s, ast.For):
                    walk_expr(s.lower)
                    walk_expr(s.upper)
                    walk(s.body)
                elif isinstance(s, ast.If):
                    for c in s.conditions:
                        walk_expr(c.left)
                        walk_expr(c.right)
                    walk(s.then_body)
                    walk(s.else_body)

        walk(v.program.body)
        assert not unresolved, (entry.name, unresolved)


def test_update_kind_retained():
    v = check_source("params N;\narray A[N];\nfor i in 0 .. N {\n  update A[i];\n}\n")
    access = v.program.body[0].body[0]
    assert access.kind == "update"


def test_empty_program_is_valid():
    v = validate(parse_source(""))
    assert v.access_count == 0


def test_empty_loop_body_is_valid():
    v = check_source("params N;\nfor i in 0 .. N {\n}\n")
    assert v.access_count == 0

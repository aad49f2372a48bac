"""Acceptance gate: one test per criterion, each with its runtime cap.

Each test asserts the behavioral requirement and that it finished inside
its stated wall-clock cap, so a verbose run of this module prints exactly
one pass/fail line per criterion.
"""

import random
import time
from contextlib import contextmanager

import pytest

import test_proofs as proof_corpus
from conftest import random_order_sentences
from taulab.codec import (
    bits_to_nat,
    decode_program_code,
    nat_to_bits,
    nat_to_decimal,
    pair,
    program_code,
    unpair,
)
from taulab.constructions import (
    CONTRADICTION,
    completeness_probe,
    craig,
    diagonal,
    henkin_complete,
    kleene_sentence,
    plant_axiom,
    rice_reduce,
    rosser_pair,
)
from taulab.fol import (
    And,
    Eq,
    Exists,
    Forall,
    FolError,
    Formula,
    Iff,
    Imp,
    Less,
    Not,
    Num,
    Or,
    Pi,
    Succ,
    Tau,
    Var,
    format_formula,
    parse_formula,
    rosser_sentence,
)
from taulab.proofs import (
    Gen,
    HostDecider,
    LogicalAxiom,
    ModusPonens,
    Proof,
    ProofStep,
    TheoryAxiom,
    EnumeratorIndexed,
    check_proof,
    code_to_proof,
    parse_proof_script,
    proof_to_code,
    prove_search,
)
from taulab.theories import (
    ORDER_AXIOMS,
    PADDING,
    TRUE_IN_STD,
    closed_tau_args,
    decide_order_theory,
    enumerate_axioms,
    eval_std,
    order_extension_derives,
    order_truth,
    segment_axiom,
    segment_axiom_index,
    tau_atom,
)
from taulab.tpl import (
    Machine,
    output_code,
    program_from_code,
    tau,
    template_source,
)

S_CODE = program_code(template_source("enum_s"))
T_CODE = program_code(template_source("enum_t"))


@contextmanager
def runtime_cap(seconds):
    started = time.monotonic()
    yield
    elapsed = time.monotonic() - started
    assert elapsed < seconds, f"took {elapsed:.1f}s, cap is {seconds}s"


# --------------------------------------------------------------------------
# 1. bitstring/natural codec

def test_criterion_01_codec_table_and_roundtrip():
    with runtime_cap(10):
        table = ["", "0", "1", "00", "01", "10", "11",
                 "000", "001", "010", "011", "100"]
        for value, bits in enumerate(table):
            assert nat_to_bits(value) == bits
            assert bits_to_nat(bits) == value
        assert bits_to_nat("0110") == 21
        assert nat_to_bits(29) == "1110"
        for value in range(10 ** 6):
            assert bits_to_nat(nat_to_bits(value)) == value
        rng = random.Random(1)
        for _ in range(10 ** 3):
            value = rng.getrandbits(512)
            assert bits_to_nat(nat_to_bits(value)) == value


# --------------------------------------------------------------------------
# 2. pairing

def test_criterion_02_pairing_grid():
    with runtime_cap(5):
        seen = {}
        for n in range(201):
            for m in range(201):
                p = pair(n, m)
                assert p == (n + m) * (n + m) + n
                assert p not in seen, (seen[p], (n, m))
                seen[p] = (n, m)
                assert unpair(p) == (n, m)
        assert unpair(7) is None


# --------------------------------------------------------------------------
# 3. bounded-halting predicate

def _tau_subjects():
    """500 (program code, input) pairs: halting, spinning, and junk."""
    looper = program_code("i = 0;\nwhile (i < in) { i = i + 1; }\n")
    spinner = program_code("while (1) { }")
    quick = program_code("out = in; halt;")
    rng = random.Random(7)
    subjects = [(looper, i) for i in range(0, 300, 2)]       # 150
    subjects += [(quick, i) for i in range(50)]              # 50
    subjects += [(spinner, i) for i in range(25)]            # 25
    while len(subjects) < 500:
        subjects.append((rng.getrandbits(rng.randrange(4, 120)),
                         rng.randrange(100)))
    return subjects


def test_criterion_03_tau_monotone_total_deterministic():
    with runtime_cap(60):
        budgets = [0, 1, 2, 3, 4, 6, 8, 12, 16, 24, 32, 48, 64, 96,
                   128, 192, 256, 384, 512, 1024]
        assert len(budgets) == 20
        subjects = _tau_subjects()
        assert len(subjects) == 500
        grid = [[tau(e, x, t) for t in budgets] for e, x in subjects]
        for row in grid:
            assert row == sorted(row), "halting is not monotone in the bound"
        assert any(True in row and False in row for row in grid)

        rng = random.Random(9)
        malformed = []
        while len(malformed) < 100:
            code = rng.getrandbits(rng.randrange(3, 200))
            if program_from_code(code) is None:
                malformed.append(code)
        for code in malformed:
            assert tau(code, 0, 512) is False

        again = [[tau(e, x, t) for t in budgets] for e, x in subjects]
        assert again == grid


# --------------------------------------------------------------------------
# 4. order-fragment decider against the evaluation oracle

def test_criterion_04_decider_matches_evaluator():
    with runtime_cap(120):
        corpus = random_order_sentences(1000, seed=42)
        assert len(corpus) >= 1000
        disagreements = [
            f for f in corpus if decide_order_theory(f) != eval_std(f)
        ]
        assert disagreements == []
        for axiom in ORDER_AXIOMS:
            assert decide_order_theory(axiom) == TRUE_IN_STD
        assert len(ORDER_AXIOMS) == 6


# --------------------------------------------------------------------------
# 5. axiom oracles

def _perturbed_segments():
    """100 near-misses of the canonical finite-segment sentences."""
    out = []
    k = 2
    while len(out) < 100:
        canon = segment_axiom(k)
        body = canon.body
        variants = [
            # bound and disjunction length disagree
            Forall("x", Iff(body.left, segment_axiom(k + 1).body.right)),
            # comparison reversed
            Forall("x", Iff(Less(Num(k), Var("x")), body.right)),
            # biconditional reordered
            Forall("x", Iff(body.right, body.left)),
            # wrong quantifier
            Exists("x", body),
            # renamed bound variable
            Forall("y", Iff(Less(Var("y"), Num(k)), body.right)),
        ]
        if k >= 2:
            # first disjunct dropped: x = 0 | ... loses its head
            pruned = body.right.right if isinstance(body.right, Or) else None
            if pruned is not None:
                variants.append(Forall("x", Iff(body.left, pruned)))
        out.extend(variants)
        k += 1
    return out[:100]


def test_criterion_05_axiom_oracles():
    with runtime_cap(120):
        from taulab.theories import axiom_member_S, axiom_member_T

        looper = program_code("i = 0;\nwhile (i < in) { i = i + 1; }\n")
        quick = program_code("halt;")
        rng = random.Random(11)
        atoms = 0
        while atoms < 500:
            e = rng.choice((looper, quick, rng.getrandbits(40)))
            atom = tau_atom(e, rng.randrange(60), rng.randrange(200))
            holds = tau(*closed_tau_args(atom))
            assert axiom_member_T(atom) == holds
            assert axiom_member_S(atom) == holds
            assert axiom_member_S(Not(atom)) == (not holds)
            atoms += 1

        for k in range(51):
            assert axiom_member_S(segment_axiom(k)), k
        rejected = _perturbed_segments()
        assert len(rejected) == 100
        for variant in rejected:
            assert not axiom_member_S(variant), format_formula(variant)

        for index in range(10 ** 4):
            axiom = enumerate_axioms("S", index)
            if index < 6:
                assert decide_order_theory(axiom) == TRUE_IN_STD
            elif index % 2 == 1:
                bound = segment_axiom_index(axiom)
                assert bound == (index - 7) // 2
                if bound <= 30:
                    assert decide_order_theory(axiom) == TRUE_IN_STD
            elif axiom == PADDING:
                assert decide_order_theory(axiom) == TRUE_IN_STD
            else:
                literal = axiom.inner if isinstance(axiom, Not) else axiom
                args = closed_tau_args(literal)
                assert args is not None
                assert tau(*args) == (not isinstance(axiom, Not))


# --------------------------------------------------------------------------
# 6. proof system: corpus, mutation fuzzing, structural-code pin

def _resolve_oracle(spec):
    if spec == proof_corpus.SIGNED_STREAM:
        return EnumeratorIndexed(S_CODE, memo=True)
    return spec


def _bump_first_numeral(node):
    """Copy of a formula with its first numeral incremented, else None."""
    hit = [False]

    def walk(n):
        if hit[0]:
            return n
        if isinstance(n, Num):
            hit[0] = True
            return Num(n.value + 1)
        if isinstance(n, Var):
            return n
        if isinstance(n, Succ):
            return Succ(walk(n.inner))
        if isinstance(n, Pi):
            return Pi(walk(n.left), walk(n.right))
        if isinstance(n, (Less, Eq)):
            return type(n)(walk(n.left), walk(n.right))
        if isinstance(n, Tau):
            return Tau(walk(n.prog), walk(n.arg), walk(n.steps))
        if isinstance(n, Not):
            return Not(walk(n.inner))
        if isinstance(n, (And, Or, Imp, Iff)):
            return type(n)(walk(n.left), walk(n.right))
        if isinstance(n, (Forall, Exists)):
            return type(n)(n.var, walk(n.body))
        raise AssertionError(n)

    result = walk(node)
    return result if hit[0] else None


def _cited_indices(steps):
    cited = set()
    for step in steps:
        just = step.justification
        if isinstance(just, ModusPonens):
            cited.update((just.antecedent, just.implication))
        elif isinstance(just, Gen):
            cited.add(just.premise)
    return cited


def _single_mutants(proof, oracle_is_stream):
    """Structurally well-formed proofs one edit away from ``proof``.

    Every yielded mutant must be caught: either it fails the check or its
    conclusion changes.  Edits that are legitimate proof transformations
    (dropping or reordering steps no later step depends on) are not
    mutants and are excluded.
    """
    steps = proof.steps
    cited = _cited_indices(steps)
    constant = parse_formula("0 = 0")
    for k, step in enumerate(steps):
        def replace(new_step, k=k):
            return Proof(steps[:k] + (new_step,) + steps[k + 1:])

        yield replace(ProofStep(Not(step.formula), step.justification))
        yield replace(ProofStep(And(step.formula, step.formula),
                                step.justification))
        yield replace(ProofStep(Imp(step.formula, step.formula),
                                step.justification))
        if step.formula != constant:
            yield replace(ProofStep(constant, step.justification))
        bumped = _bump_first_numeral(step.formula)
        if bumped is not None:
            yield replace(ProofStep(bumped, step.justification))

        just = step.justification
        if isinstance(just, TheoryAxiom) and oracle_is_stream:
            yield replace(ProofStep(step.formula, TheoryAxiom(just.index + 1)))
            yield replace(ProofStep(step.formula, TheoryAxiom(just.index + 7)))
        elif isinstance(just, LogicalAxiom):
            other = "weakening" if just.schema != "weakening" else "distribution"
            yield replace(ProofStep(step.formula, LogicalAxiom(other)))
        elif isinstance(just, ModusPonens):
            yield replace(ProofStep(
                step.formula, ModusPonens(just.implication, just.antecedent)))
            yield replace(ProofStep(
                step.formula, ModusPonens(just.antecedent, just.antecedent)))
        elif isinstance(just, Gen):
            yield replace(ProofStep(step.formula, Gen(just.premise, "zz")))

        final = k == len(steps) - 1
        if k in cited or (final and not (
                len(steps) > 1 and steps[-2].formula == step.formula)):
            yield Proof(steps[:k] + steps[k + 1:])
        if k + 1 < len(steps) and (
                k in cited or k + 1 in cited or k + 1 == len(steps) - 1):
            yield Proof(steps[:k] + (steps[k + 1], steps[k])
                        + steps[k + 2:])


def test_criterion_06_proof_corpus_mutants_and_code_pin():
    with runtime_cap(60):
        scripts = {}
        for name, oracle_spec in proof_corpus.VENDORED.items():
            text = (proof_corpus.DATA / name).read_text()
            scripts[name] = (parse_proof_script(text),
                             _resolve_oracle(oracle_spec))
        assert len(scripts) >= 20
        for name, (proof, oracle) in scripts.items():
            assert check_proof(proof, oracle, proof.conclusion()).ok, name

        survivors = []
        total = 0
        for name, (proof, oracle) in scripts.items():
            stream = isinstance(oracle, EnumeratorIndexed)
            for mutant in _single_mutants(proof, stream):
                total += 1
                result = check_proof(mutant, oracle)
                if not result.ok:
                    continue
                conclusion = result.formulas[-1] if result.formulas else None
                if conclusion == proof.conclusion():
                    survivors.append((name, mutant))
        assert total >= 500, total
        assert survivors == []

        pinned = Proof((ProofStep(ORDER_AXIOMS[0], TheoryAxiom(0)),))
        assert proof_to_code(pinned) == 10
        decoded = code_to_proof(10)
        assert decoded is not None
        assert proof_to_code(decoded) == 10
        assert check_proof(decoded, EnumeratorIndexed(S_CODE),
                           ORDER_AXIOMS[0]).ok


# --------------------------------------------------------------------------
# 7. stepwise completion

def test_criterion_07_completion_processes_200_sentences():
    with runtime_cap(120):
        corpus = random_order_sentences(200, seed=2026)
        state = henkin_complete(order_extension_derives, corpus, 200)
        assert len(state.committed) == 200
        for checkpoint in (25, 50, 100, 200):
            prefix = [f if polarity else Not(f)
                      for f, polarity in state.committed[:checkpoint]]
            assert not order_extension_derives(prefix, CONTRADICTION)
        for sentence, polarity in state.committed:
            positive = state.decide(sentence)
            negative = state.decide(Not(sentence))
            assert positive != negative, format_formula(sentence)
            assert positive == polarity
        assert completeness_probe(state.decide, corpus) == []
        replay = henkin_complete(order_extension_derives, corpus, 200)
        assert replay.committed == state.committed


# --------------------------------------------------------------------------
# 8. prefix-conjunction closure

def test_criterion_08_closure_membership_decider_and_witnesses():
    with runtime_cap(60):
        art = craig(S_CODE)
        positives = [art.prefix(length) for length in range(1, 52)]
        negatives = [art.axiom(i) for i in range(1, 31)]
        negatives += [
            And(art.axiom(0), And(art.axiom(1), art.axiom(2))),
            And(art.axiom(1), art.axiom(0)),
            parse_formula("0 = 0"),
            parse_formula("A x. x = x"),
        ]
        for sentence in positives:
            assert art.member(sentence)
        for sentence in negatives:
            assert not art.member(sentence)

        decider = program_from_code(art.decider_code)
        for sentence in positives + negatives:
            machine = Machine(decider,
                              program_code(format_formula(sentence)),
                              10 ** 6).run()
            assert machine.halted
            verdict = output_code(machine) == 1
            assert verdict == art.member(sentence), format_formula(sentence)

        closure_oracle = EnumeratorIndexed(art.prefix_code, memo=True)
        stream_oracle = EnumeratorIndexed(S_CODE, memo=True)
        for i in (0, 1, 2, 5, 10, 20):
            proof = art.proof_of_axiom(i)
            assert check_proof(proof, closure_oracle, art.axiom(i)).ok
            back = art.proof_of_prefix(i)
            assert check_proof(back, stream_oracle, art.prefix(i + 1)).ok


# --------------------------------------------------------------------------
# 9. the racing pair, end to end

def test_criterion_09_racing_pair_end_to_end():
    with runtime_cap(600):
        art = rosser_pair(S_CODE)
        n, m = art.negative, art.positive
        assert art.sentence == rosser_sentence(n, m)
        assert format_formula(art.sentence) == \
            format_formula(rosser_sentence(n, m))
        probe = pair(n, m)

        planted_pos = rosser_pair(plant_axiom(art.sentence, S_CODE))
        run = Machine(program_from_code(planted_pos.positive), probe,
                      10 ** 6).run()
        assert run.halted, "positive searcher missed its planted sentence"

        planted_neg = rosser_pair(
            plant_axiom(Not(art.sentence), S_CODE))
        run = Machine(program_from_code(planted_neg.negative), probe,
                      10 ** 6).run()
        assert run.halted, "negative searcher missed its planted negation"

        for honest in (m, n):
            run = Machine(program_from_code(honest), probe, 10 ** 6).run()
            assert not run.halted and run.fault is None

        oracle = EnumeratorIndexed(S_CODE, memo=True)
        assert prove_search(oracle, art.sentence, 10 ** 6) is None
        assert prove_search(oracle, Not(art.sentence), 10 ** 6) is None


# --------------------------------------------------------------------------
# 10. the self-referential searcher

def test_criterion_10_searcher_sentence():
    with runtime_cap(300):
        m, sentence = kleene_sentence(S_CODE)
        assert sentence == Not(Exists("z", Tau(Num(m), Num(m), Var("z"))))
        digits = nat_to_decimal(m)
        assert format_formula(sentence) == \
            f"~(E z. tau(#{digits}, #{digits}, z))"

        planted = kleene_sentence(plant_axiom(sentence, S_CODE))[0]
        run = Machine(program_from_code(planted), m, 10 ** 6).run()
        assert run.halted, "searcher missed its planted sentence"

        honest = Machine(program_from_code(m), m, 10 ** 6).run()
        assert not honest.halted and honest.fault is None


# --------------------------------------------------------------------------
# 11. diagonal refutation reports

def test_criterion_11_diagonal_reports():
    with runtime_cap(120):
        refusal = diagonal(program_code("out = 0; halt;"),
                           search_budget=10 ** 4)
        assert refusal.claimed is False
        assert refusal.observed and refusal.refuted
        assert refusal.witness_step is not None
        assert tau(refusal.diagonal_code, refusal.diagonal_code,
                   refusal.witness_step)

        assent = diagonal(program_code("out = 1; halt;"),
                          search_budget=10 ** 4)
        assert assent.claimed is True
        assert not assent.observed and not assent.refuted
        assert assent.witness_step is None
        assert assent.searched_codes == 10 ** 4
        assert assent.found_proof_code is None


# --------------------------------------------------------------------------
# 12. consistency-to-deviation reduction

def test_criterion_12_reduction_prefixes():
    with runtime_cap(120):
        trigger = parse_formula("0 < #1")
        consistent = rice_reduce(T_CODE, S_CODE, trigger)
        ours = program_from_code(consistent.enumerator_code)
        base = program_from_code(S_CODE)
        for index in range(101):
            emitted = Machine(ours, index, 10 ** 6).run()
            reference = Machine(base, index, 10 ** 6).run()
            assert emitted.halted and reference.halted
            assert output_code(emitted) == output_code(reference), index

        contradiction = And(trigger, Not(trigger))
        tainted = rice_reduce(plant_axiom(contradiction, T_CODE),
                              S_CODE, trigger)
        deviation = proof_to_code(
            Proof((ProofStep(contradiction, TheoryAxiom(0)),)))
        assert deviation == 10
        run = Machine(program_from_code(tainted.enumerator_code),
                      deviation, 10 ** 6).run()
        assert run.halted
        assert output_code(run) == program_code(format_formula(contradiction))
        assert tainted.axiom(deviation) == contradiction

import pytest

from src.verification.theorem_checks import TheoremChecker

CHECKS = [
    "shift_rule",
    "additivity",
    "partition",
    "coset_translation",
    "character_sums",
    "inner_product",
    "defining_pair_uniqueness",
]


class TestTheoremChecker:

    @pytest.mark.parametrize("p", [3, 5, 7, 11, 13])
    def test_all_checks_pass(self, contexts, fields, p):
        fld, beta = fields[p]
        summary = TheoremChecker(contexts[p], fld, beta).run_all_checks()
        assert summary["overall_score"] == 100.0
        assert summary["failed_checks"] == 0
        assert list(summary["individual_results"]) == CHECKS

    def test_result_shape(self, contexts, fields):
        fld, beta = fields[3]
        result = TheoremChecker(contexts[3], fld, beta).check_shift_rule()
        assert result["check_name"] == "shift_rule"
        assert result["passed"] is True
        assert result["checked"] == 6 * 3
        assert result["failures"] == []

    def test_inner_product_counts_every_pair(self, contexts, fields):
        fld, beta = fields[5]
        assert TheoremChecker(contexts[5], fld, beta).check_inner_product()["checked"] == 25

    def test_field_comes_from_cache_when_absent(self, contexts):
        result = TheoremChecker(contexts[3]).check_character_sums()
        assert result["passed"]

    def test_errors_become_failed_checks(self, contexts, fields):
        fld, beta = fields[3]
        checker = TheoremChecker(contexts[3], fld, beta ** 3)
        summary = checker.run_all_checks()
        failed = [name for name, r in summary["individual_results"].items() if not r["passed"]]
        assert failed == ["character_sums", "inner_product", "defining_pair_uniqueness"]
        assert "error_message" in summary["individual_results"]["inner_product"]

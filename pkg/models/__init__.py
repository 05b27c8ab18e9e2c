# Models package
from models.base import Base, CheckRecord, SuiteRun
from models.report import CheckResult, SuiteReport

__all__ = ["Base", "CheckRecord", "SuiteRun", "CheckResult", "SuiteReport"]

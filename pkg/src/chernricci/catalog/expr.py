"""A small arithmetic/boolean expression evaluator for catalog data.

Only numeric literals, named parameters, arithmetic, comparisons, boolean
connectives and a few math functions are accepted; anything else in the
syntax tree is rejected before evaluation.
"""
import ast
import math
import operator
import re

_BIN = {
    ast.Add: operator.add,
    ast.Sub: operator.sub,
    ast.Mult: operator.mul,
    ast.Div: operator.truediv,
    ast.Pow: operator.pow,
}
_UNARY = {ast.USub: operator.neg, ast.UAdd: operator.pos, ast.Not: operator.not_}
_CMP = {
    ast.Lt: operator.lt,
    ast.LtE: operator.le,
    ast.Gt: operator.gt,
    ast.GtE: operator.ge,
    ast.Eq: operator.eq,
    ast.NotEq: operator.ne,
}
_FUNCS = {"sqrt": math.sqrt, "abs": abs}
_CONSTS = {"pi": math.pi}

# "lambda" is a natural parameter name but a Python keyword
_KEYWORD_ALIAS = re.compile(r"\blambda\b")


class ExpressionError(ValueError):
    pass


def _alias(name):
    return "lambda_" if name == "lambda" else name


def parse(text):
    src = _KEYWORD_ALIAS.sub("lambda_", str(text))
    try:
        tree = ast.parse(src, mode="eval")
    except SyntaxError as exc:
        raise ExpressionError(f"cannot parse {text!r}: {exc.msg}") from None
    _check(tree.body, text)
    return tree.body


def _check(node, text):
    if isinstance(node, ast.Constant):
        if isinstance(node.value, bool) or not isinstance(node.value, (int, float)):
            raise ExpressionError(f"unsupported literal in {text!r}")
    elif isinstance(node, ast.Name):
        pass
    elif isinstance(node, ast.BinOp) and type(node.op) in _BIN:
        _check(node.left, text)
        _check(node.right, text)
    elif isinstance(node, ast.UnaryOp) and type(node.op) in _UNARY:
        _check(node.operand, text)
    elif isinstance(node, ast.BoolOp):
        for v in node.values:
            _check(v, text)
    elif isinstance(node, ast.Compare) and all(type(op) in _CMP for op in node.ops):
        _check(node.left, text)
        for v in node.comparators:
            _check(v, text)
    elif (
        isinstance(node, ast.Call)
        and isinstance(node.func, ast.Name)
        and node.func.id in _FUNCS
        and not node.keywords
    ):
        for a in node.args:
            _check(a, text)
    else:
        raise ExpressionError(f"unsupported syntax in {text!r}")


def _eval(node, env):
    if isinstance(node, ast.Constant):
        return node.value
    if isinstance(node, ast.Name):
        if node.id in env:
            return env[node.id]
        if node.id in _CONSTS:
            return _CONSTS[node.id]
        raise ExpressionError(f"unknown name {node.id!r}")
    if isinstance(node, ast.BinOp):
        return _BIN[type(node.op)](_eval(node.left, env), _eval(node.right, env))
    if isinstance(node, ast.UnaryOp):
        return _UNARY[type(node.op)](_eval(node.operand, env))
    if isinstance(node, ast.BoolOp):
        vals = (_eval(v, env) for v in node.values)
        return all(vals) if isinstance(node.op, ast.And) else any(vals)
    if isinstance(node, ast.Compare):
        left = _eval(node.left, env)
        for op, comp in zip(node.ops, node.comparators):
            right = _eval(comp, env)
            if not _CMP[type(op)](left, right):
                return False
            left = right
        return True
    if isinstance(node, ast.Call):
        return _FUNCS[node.func.id](*(_eval(a, env) for a in node.args))
    raise ExpressionError("unsupported node")  # unreachable after _check


def evaluate(text, env=None):
    """Value of ``text`` (a number passes through) under parameter map ``env``."""
    if isinstance(text, bool):
        raise ExpressionError("booleans are not expressions")
    if isinstance(text, (int, float)):
        return text
    env = {_alias(k): v for k, v in (env or {}).items()}
    return _eval(parse(text), env)


def evaluate_all(values, env=None):
    return [float(evaluate(v, env)) for v in values]

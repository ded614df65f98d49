#!/usr/bin/env python3
"""MCP server for the tt kernel - lets agents check, normalize and compare terms."""

import asyncio
import sys
from pathlib import Path

from .errors import KernelError
from .nbe import quote_type, sort_of
from .parser import parse_file, parse_term
from .printer import pretty
from .typecheck import GlobalEnv, TypingContext, check_decls, compare, elaborate, normalize


def load_source(source: str) -> str:
    """Declarations given inline or as a path to a .tt file."""
    stripped = source.strip()
    if stripped.endswith('.tt') and '\n' not in stripped:
        path = Path(stripped)
        if path.exists():
            return path.read_text(encoding='utf-8')
        raise FileNotFoundError(stripped)
    return source


def load_globals(args: dict) -> GlobalEnv:
    source = args.get("source") or ""
    return check_decls(parse_file(load_source(source)))


def run_tool(name: str, args: dict) -> str:
    """Dispatch one tool call; failures come back as text."""
    try:
        if name == "tt_check":
            globals = load_globals(args)
            return f"ok: {len(globals)} declarations"

        if name == "tt_nf":
            globals = load_globals(args)
            normal, _ = normalize(globals, parse_term(args["expr"]))
            return pretty(normal, annotated=bool(args.get("annotated", False)))

        if name == "tt_infer":
            globals = load_globals(args)
            _, ty = elaborate(globals, parse_term(args["expr"]))
            scope = TypingContext.empty(globals).scope
            return f"{pretty(quote_type(scope, ty))}\nsort: {sort_of(scope, ty)}"

        if name == "tt_conv":
            globals = load_globals(args)
            equal = compare(globals, elaborate(globals, parse_term(args["expr1"])),
                            elaborate(globals, parse_term(args["expr2"])))
            if equal is None:
                return "incompatible"
            return "equal" if equal else "not-equal"

        return f"Unknown tool: {name}"
    except KernelError as e:
        return f"Error: {e}"
    except FileNotFoundError as e:
        return f"File not found: {e}"
    except KeyError as e:
        return f"Error: missing argument {e}"


_SOURCE = {"type": "string", "description": "Declarations (.tt text) or a path to a .tt file"}


def main():
    try:
        from mcp.server import Server
        from mcp.server.stdio import stdio_server
        from mcp.types import Tool, TextContent
    except ImportError:
        print("Install MCP: pip install mcp", file=sys.stderr)
        sys.exit(1)

    sys.setrecursionlimit(max(sys.getrecursionlimit(), 20000))
    server = Server("tt-kernel")

    @server.list_tools()
    async def list_tools():
        return [
            Tool(name="tt_check", description="Type-check a list of declarations. Replies 'ok: N declarations' or the first error with its line:column.",
                 inputSchema={"type": "object", "properties": {"source": _SOURCE}, "required": ["source"]}),
            Tool(name="tt_nf", description="Normal form of an expression in the scope of the declarations. Set annotated for the fully annotated prefix form.",
                 inputSchema={"type": "object", "properties": {"source": _SOURCE, "expr": {"type": "string"}, "annotated": {"type": "boolean", "default": False}}, "required": ["expr"]}),
            Tool(name="tt_infer", description="Normal form of the inferred type of an expression, and its sort.",
                 inputSchema={"type": "object", "properties": {"source": _SOURCE, "expr": {"type": "string"}}, "required": ["expr"]}),
            Tool(name="tt_conv", description="Decide whether two expressions are judgmentally equal. Replies equal, not-equal or incompatible.",
                 inputSchema={"type": "object", "properties": {"source": _SOURCE, "expr1": {"type": "string"}, "expr2": {"type": "string"}}, "required": ["expr1", "expr2"]}),
        ]

    @server.call_tool()
    async def call_tool(name, args):
        return [TextContent(type="text", text=run_tool(name, args or {}))]

    async def run():
        async with stdio_server() as streams:
            await server.run(
                streams[0],
                streams[1],
                server.create_initialization_options()
            )
    asyncio.run(run())


if __name__ == "__main__":
    main()

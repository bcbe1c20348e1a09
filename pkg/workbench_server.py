"""
MCP Server for the Stone Workbench
Exposes every workbench verb as a tool; results are JSON envelopes in text content
"""
import asyncio
import logging
from typing import Any, Callable, Dict

from mcp.server import Server
from mcp.server.stdio import stdio_server
from mcp.types import TextContent, Tool

from checks import SUITES
from commands import (
    TOWER_KINDS,
    CommandResult,
    check_command,
    dual_set_command,
    dual_spec_command,
    factor_command,
    factor_count_command,
    pearl_command,
    pi0_command,
    quotient_command,
    sheaf_demo_command,
    tower_command,
)
from config import override_config
from errors import WorkbenchError
from serialization import dumps

logger = logging.getLogger(__name__)

EXPR_SCHEMA = {
    "type": "object",
    "properties": {
        "expr": {
            "type": "string",
            "description": "Algebra expression, e.g. GF(2)[x]/(x^2+x+1) (x) Fn(2,2)"
        },
        "dim_cap": {
            "type": "number",
            "description": "Largest algebra dimension to build"
        }
    },
    "required": ["expr"]
}

POLY_SCHEMA = {
    "type": "object",
    "properties": {
        "p": {
            "type": "number",
            "description": "Prime characteristic"
        },
        "poly": {
            "type": "string",
            "description": "Monic polynomial in x, e.g. x^3+x+1"
        }
    },
    "required": ["p", "poly"]
}


class WorkbenchServer:
    """MCP Server with one tool per workbench command"""

    def __init__(self):
        self.server = Server("stone-workbench")
        self.handlers: Dict[str, Callable] = {
            "pearl": self.pearl_tool,
            "pi0": self.pi0_tool,
            "stone_quotient": self.stone_quotient_tool,
            "dual_set": self.dual_set_tool,
            "dual_spec": self.dual_spec_tool,
            "factor_count": self.factor_count_tool,
            "factor": self.factor_tool,
            "tower": self.tower_tool,
            "sheaf_demo": self.sheaf_demo_tool,
            "check": self.check_tool,
        }
        self.setup_handlers()

    def tools(self) -> list[Tool]:
        return [
            Tool(
                name="pearl",
                description="Compute the pearl (largest p-Boolean subalgebra, the Frobenius-fixed part) of a finite algebra",
                inputSchema=EXPR_SCHEMA
            ),
            Tool(
                name="pi0",
                description="Decompose a finite algebra along its primitive idempotents (connected components of Spec A)",
                inputSchema=EXPR_SCHEMA
            ),
            Tool(
                name="stone_quotient",
                description="Compute Q(A) = A / (b^p - b), the universal p-Boolean quotient",
                inputSchema=EXPR_SCHEMA
            ),
            Tool(
                name="dual_set",
                description="Build GF(p)^S for a finite set and check the duality unit, counit and an optional map",
                inputSchema={
                    "type": "object",
                    "properties": {
                        "n": {
                            "type": "number",
                            "description": "Number of points in S"
                        },
                        "p": {
                            "type": "number",
                            "description": "Prime characteristic"
                        },
                        "map": {
                            "type": "array",
                            "items": {"type": "number"},
                            "description": "Target index of every point of S"
                        },
                        "target": {
                            "type": "number",
                            "description": "Size of the target set"
                        }
                    },
                    "required": ["n", "p"]
                }
            ),
            Tool(
                name="dual_spec",
                description="List the points of a p-Boolean algebra as its primitive idempotents",
                inputSchema=EXPR_SCHEMA
            ),
            Tool(
                name="factor_count",
                description="Count distinct irreducible factors of a monic polynomial via the pearl of GF(p)[x]/(f)",
                inputSchema=POLY_SCHEMA
            ),
            Tool(
                name="factor",
                description="Factor a squarefree monic polynomial over GF(p) by splitting with pearl elements",
                inputSchema=POLY_SCHEMA
            ),
            Tool(
                name="tower",
                description="Describe a Cantor or ternary tower, or compute a complement, clopen idempotent or level algebra map",
                inputSchema={
                    "type": "object",
                    "properties": {
                        "kind": {
                            "type": "string",
                            "enum": sorted(TOWER_KINDS),
                            "default": "cantor"
                        },
                        "depth": {
                            "type": "number",
                            "description": "Deepest level"
                        },
                        "action": {
                            "type": "string",
                            "enum": ["complement", "clopen", "algebra"]
                        },
                        "p": {
                            "type": "number",
                            "default": 2
                        },
                        "top": {
                            "type": "array",
                            "items": {"type": "number"},
                            "description": "Deepest-level points of a closed subtower"
                        },
                        "level": {
                            "type": "number",
                            "default": 0
                        },
                        "base": {
                            "type": "array",
                            "items": {"type": "number"},
                            "description": "Points at the given level carrying cylinders"
                        }
                    },
                    "required": ["depth"]
                }
            ),
            Tool(
                name="sheaf_demo",
                description="Build a module over GF(p)^S with given stalk dimensions, its sheaf, and its tensor square",
                inputSchema={
                    "type": "object",
                    "properties": {
                        "p": {
                            "type": "number",
                            "default": 2
                        },
                        "dims": {
                            "type": "array",
                            "items": {"type": "number"},
                            "description": "Stalk dimension at every point"
                        },
                        "seed": {
                            "type": "number",
                            "description": "Seed for the random basis"
                        }
                    },
                    "required": ["dims"]
                }
            ),
            Tool(
                name="check",
                description="Run seeded property suites of the workbench",
                inputSchema={
                    "type": "object",
                    "properties": {
                        "suites": {
                            "type": "array",
                            "items": {"type": "string", "enum": list(SUITES)},
                            "description": "Suites to run (default: all)"
                        },
                        "seed": {
                            "type": "number"
                        }
                    },
                    "required": []
                }
            ),
        ]

    def setup_handlers(self):
        """Setup request handlers"""

        @self.server.list_tools()
        async def list_tools() -> list[Tool]:
            """List available tools"""
            return self.tools()

        @self.server.call_tool()
        async def call_tool(name: str, arguments: Any) -> list[TextContent]:
            """Handle tool calls"""
            handler = self.handlers.get(name)
            if handler is None:
                return [TextContent(type="text", text=f"❌ Error: Unknown tool '{name}'")]
            return await handler(arguments or {})

    async def _run(self, command: Callable[..., CommandResult], *args, dim_cap=None, **kwargs) -> list[TextContent]:
        """Run a command off the event loop and render its envelope, or the error"""

        def work() -> CommandResult:
            with override_config(dim_cap=dim_cap):
                return command(*args, **kwargs)

        try:
            result = await asyncio.to_thread(work)
        except WorkbenchError as e:
            logger.info("tool failed: %s", e.message)
            return [TextContent(type="text", text=f"❌ Error [{e.code}]: {e.message}")]
        except (KeyError, TypeError, ValueError) as e:
            return [TextContent(type="text", text=f"❌ Error: invalid arguments ({e})")]
        return [TextContent(type="text", text=dumps(result.envelope()))]

    async def pearl_tool(self, arguments: dict) -> list[TextContent]:
        return await self._run(pearl_command, arguments["expr"], dim_cap=arguments.get("dim_cap"))

    async def pi0_tool(self, arguments: dict) -> list[TextContent]:
        return await self._run(pi0_command, arguments["expr"], dim_cap=arguments.get("dim_cap"))

    async def stone_quotient_tool(self, arguments: dict) -> list[TextContent]:
        return await self._run(quotient_command, arguments["expr"], dim_cap=arguments.get("dim_cap"))

    async def dual_set_tool(self, arguments: dict) -> list[TextContent]:
        assignment = arguments.get("map")
        return await self._run(
            dual_set_command,
            int(arguments["n"]),
            int(arguments["p"]),
            [int(i) for i in assignment] if assignment is not None else None,
            int(arguments["target"]) if "target" in arguments else None,
        )

    async def dual_spec_tool(self, arguments: dict) -> list[TextContent]:
        return await self._run(dual_spec_command, arguments["expr"], dim_cap=arguments.get("dim_cap"))

    async def factor_count_tool(self, arguments: dict) -> list[TextContent]:
        return await self._run(factor_count_command, int(arguments["p"]), arguments["poly"])

    async def factor_tool(self, arguments: dict) -> list[TextContent]:
        return await self._run(factor_command, int(arguments["p"]), arguments["poly"])

    async def tower_tool(self, arguments: dict) -> list[TextContent]:
        return await self._run(
            tower_command,
            arguments.get("kind", "cantor"),
            int(arguments["depth"]),
            arguments.get("action"),
            p=int(arguments.get("p", 2)),
            top=[int(i) for i in arguments.get("top", [])],
            level=int(arguments.get("level", 0)),
            base=[int(i) for i in arguments.get("base", [])],
        )

    async def sheaf_demo_tool(self, arguments: dict) -> list[TextContent]:
        seed = arguments.get("seed")
        return await self._run(
            sheaf_demo_command,
            int(arguments.get("p", 2)),
            [int(d) for d in arguments["dims"]],
            int(seed) if seed is not None else None,
        )

    async def check_tool(self, arguments: dict) -> list[TextContent]:
        seed = arguments.get("seed")
        return await self._run(check_command, list(arguments.get("suites", [])),
                               int(seed) if seed is not None else None)

    async def run(self):
        """Run the MCP server"""
        async with stdio_server() as (read_stream, write_stream):
            await self.server.run(
                read_stream,
                write_stream,
                self.server.create_initialization_options()
            )


async def main():
    """Main entry point"""
    server = WorkbenchServer()
    await server.run()


if __name__ == "__main__":
    asyncio.run(main())

"""SQL layer: DDL, catalog, query parsing, and execution over the store."""

from .ddl import (
    ColumnDef,
    ColumnMapping,
    CreateTable,
    DescribeTable,
    DropTable,
    RelationalSchema,
    generate_schema,
    parse_ddl,
    parse_ddl_statement,
)
from .engine import (
    Catalog,
    ResultSet,
    StatementOutcome,
    execute_query,
    execute_statement,
    parse_statement,
    render_result_set,
    render_value,
)
from .errors import (
    CatalogError,
    SqlError,
    SqlSyntaxError,
    TypeDecodeError,
    UnsupportedClauseError,
)
from .lexer import split_statements
from .query import (
    ColumnRef,
    Comparison,
    InList,
    JoinClause,
    KeyFieldRef,
    SelectQuery,
    TableSource,
    parse_query,
)

__all__ = [
    "Catalog",
    "CatalogError",
    "ColumnDef",
    "ColumnMapping",
    "ColumnRef",
    "Comparison",
    "CreateTable",
    "DescribeTable",
    "DropTable",
    "InList",
    "JoinClause",
    "KeyFieldRef",
    "RelationalSchema",
    "ResultSet",
    "SelectQuery",
    "SqlError",
    "SqlSyntaxError",
    "StatementOutcome",
    "TableSource",
    "TypeDecodeError",
    "UnsupportedClauseError",
    "execute_query",
    "execute_statement",
    "generate_schema",
    "parse_ddl",
    "parse_ddl_statement",
    "parse_query",
    "parse_statement",
    "render_result_set",
    "render_value",
    "split_statements",
]

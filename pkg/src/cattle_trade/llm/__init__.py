from .agent import LLMAgent
from .client import ChatClient, Completion, EndpointConfig, EndpointError, EndpointUnavailable
from .parse import ParseResult, parse_action, safe_default
from .prompts import RULES, system_prompt
from .render import describe_event, render_observation

__all__ = [
    "ChatClient", "Completion", "EndpointConfig", "EndpointError", "EndpointUnavailable",
    "LLMAgent", "ParseResult", "RULES", "describe_event", "parse_action", "render_observation",
    "safe_default", "system_prompt",
]

"""Pipeline for generating Java test code blocks from natural-language step
descriptions: static analysis of a repository into a code graph, lexical
retrieval of exemplar blocks, prompt assembly under a token budget, generation
through a chat-completions endpoint (or hermetic mocks), method-invocation F1
evaluation, and instruction-fine-tuning dataset export."""

__version__ = "0.1.0"

"""Dynamic epistemic logic with communication actions."""

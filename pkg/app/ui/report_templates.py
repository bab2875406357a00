from jinja2 import Template

# generic report: scalar fields, notes, then a fixed-width table of rows
REPORT_TEMPLATE = Template(
    """{{ title }}{% if action %} [{{ action }}]{% endif %}: {{ "ok" if ok else "FAILED" }}
{% for key, value in fields %}  {{ key }}: {{ value }}
{% endfor %}{% if errors %}  errors: {{ errors }}
{% endif %}{% for note in notes %}  note: {{ note }}
{% endfor %}{% if columns %}
{% for c in columns %}{{ c.ljust(widths[c]) }}  {% endfor %}
{% for row in rows %}{% for c in columns %}{{ (row.get(c, '') | string).ljust(widths[c]) }}  {% endfor %}
{% endfor %}{% endif %}"""
)

# acceptance matrix, one line per criterion
ACCEPTANCE_TEMPLATE = Template(
    """{{ title }} {{ version }} (seed {{ seed }})
{% for row in report.rows %}[{{ "PASS" if row.ok else "FAIL" }}] {{ "%2d" | format(row.criterion) }}  {{ row.name.ljust(28) }}{% if row.detail %}  {{ row.detail }}{% endif %}
{% endfor %}{{ report.passed }}/{{ report.rows | length }} criteria passed
"""
)

TEMPLATES = {
    "acceptance": ACCEPTANCE_TEMPLATE,
}

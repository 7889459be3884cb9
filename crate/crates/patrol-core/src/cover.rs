// temporary placeholder
